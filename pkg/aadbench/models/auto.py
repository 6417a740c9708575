import importlib

from aadbench.configs.algorithm import AlgorithmConfig
from aadbench.models.base import BaseDecoder
from aadbench.utils.exceptions import ConfigError


class AutoDecoder:

    @classmethod
    def from_config(cls, config: AlgorithmConfig, inner_folds: int = 10) -> BaseDecoder:

        if config.algorithm_name in ('mmse_avgcorr_ridge', 'mmse_avgcorr_lasso',
                                     'mmse_avgdec_ridge', 'mmse_avgdec_lasso'):
            return getattr(importlib.import_module(
                "aadbench.models.mmse"),
                "MmseDecoder").from_config(config)

        elif config.algorithm_name == 'cca':
            return getattr(importlib.import_module(
                "aadbench.models.cca"),
                "CcaDecoder").from_config(config, inner_folds=inner_folds)

        elif config.algorithm_name == 'mmse_adap_lasso':
            return getattr(importlib.import_module(
                "aadbench.models.adaptive"),
                "AdaptiveLassoDecoder").from_config(config)

        elif config.algorithm_name == 'nn_sr':
            return getattr(importlib.import_module(
                "aadbench.models.nn_sr"),
                "NnSrDecoder").from_config(config)

        elif config.algorithm_name == 'oracle':
            return getattr(importlib.import_module(
                "aadbench.models.baselines"),
                "OracleDecoder").from_config(config)

        elif config.algorithm_name == 'anti_oracle':
            return getattr(importlib.import_module(
                "aadbench.models.baselines"),
                "AntiOracleDecoder").from_config(config)

        elif config.algorithm_name == 'coin_flip':
            return getattr(importlib.import_module(
                "aadbench.models.baselines"),
                "CoinFlipDecoder").from_config(config)

        else:
            raise ConfigError(f"Algorithm {config.algorithm_name} not supported.")
