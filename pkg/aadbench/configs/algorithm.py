from typing import Any, Dict, List, Optional, Union

from aadbench.configs.base import Config
from aadbench.configs.preprocessing import PreprocessingConfig
from aadbench.configs.trainer import TrainerConfig

ALGORITHM_NAMES = (
    'mmse_avgcorr_ridge', 'mmse_avgcorr_lasso', 'mmse_avgdec_ridge', 'mmse_avgdec_lasso',
    'cca', 'mmse_adap_lasso', 'nn_sr', 'oracle', 'anti_oracle', 'coin_flip')
PCA_SPACES = ('channel', 'lag')
MARKERS = ('l1', 'correlation')


class AlgorithmConfig(Config):

    def __init__(
        self,
        algorithm_name: str,
        name: Optional[str] = None,
        lags: float = 0.25,
        envelope_lags: float = 1.25,
        lambda_grid: Optional[List[float]] = None,
        admm_rho: float = 1.0,
        admm_tol: float = 1e-6,
        admm_max_iter: int = 2000,
        pca_var_keep: Union[float, int] = 1.0,
        pca_space: str = 'channel',
        max_components: Optional[int] = None,
        channel_subset: Optional[List[Union[int, str]]] = None,
        marker: str = 'l1',
        max_tuning_windows: Optional[int] = None,
        preprocessing: Optional[Union[Dict[str, Any], PreprocessingConfig]] = None,
        trainer: Optional[Union[Dict[str, Any], TrainerConfig]] = None,
        seed: int = 1337,
    ):
        super().__init__()
        self.algorithm_name = algorithm_name
        self.name = name if name is not None else algorithm_name

        # model order, in seconds
        self.lags = lags
        self.envelope_lags = envelope_lags

        # regularisation
        self.lambda_grid = lambda_grid
        self.admm_rho = admm_rho
        self.admm_tol = admm_tol
        self.admm_max_iter = admm_max_iter

        # cca
        self.pca_var_keep = pca_var_keep
        self.pca_space = pca_space
        self.max_components = max_components

        # adaptive lasso
        self.channel_subset = channel_subset
        self.marker = marker
        self.max_tuning_windows = max_tuning_windows

        self.preprocessing = PreprocessingConfig.from_dict(preprocessing) \
            if isinstance(preprocessing, dict) else preprocessing
        self.trainer = TrainerConfig.from_dict(trainer) if isinstance(trainer, dict) else trainer
        self.seed = seed
        self._post_init()

    def _post_init(self):
        self._require(self.algorithm_name in ALGORITHM_NAMES, 'algorithm_name',
                      f"unknown algorithm {self.algorithm_name}, choose from {ALGORITHM_NAMES}")
        self._require(self.lags > 0, 'lags', f"must be positive, got {self.lags}")
        self._require(self.envelope_lags > 0, 'envelope_lags', f"must be positive, got {self.envelope_lags}")
        if self.lambda_grid is not None:
            grid = list(self.lambda_grid)
            self._require(len(grid) > 0 and all(v >= 0 for v in grid), 'lambda_grid',
                          "must be a non-empty list of non-negative values")
            self._require(all(b > a for a, b in zip(grid, grid[1:])), 'lambda_grid', "must be strictly increasing")
        self._require(self.admm_rho > 0, 'admm_rho', f"must be positive, got {self.admm_rho}")
        self._require(self.admm_tol > 0, 'admm_tol', f"must be positive, got {self.admm_tol}")
        self._require(self.admm_max_iter >= 1, 'admm_max_iter', f"must be at least 1, got {self.admm_max_iter}")
        # an int is a component count, a float a fraction of variance
        if isinstance(self.pca_var_keep, int):
            self._require(self.pca_var_keep >= 1, 'pca_var_keep', f"component count must be positive, got {self.pca_var_keep}")
        else:
            self._require(0 < self.pca_var_keep <= 1, 'pca_var_keep', f"fraction must lie in (0, 1], got {self.pca_var_keep}")
        self._require(self.pca_space in PCA_SPACES, 'pca_space', f"choose from {PCA_SPACES}, got {self.pca_space}")
        if self.max_components is not None:
            self._require(self.max_components >= 1, 'max_components', f"must be positive, got {self.max_components}")
        self._require(self.marker in MARKERS, 'marker', f"choose from {MARKERS}, got {self.marker}")
        if self.max_tuning_windows is not None:
            self._require(self.max_tuning_windows >= 1, 'max_tuning_windows',
                          f"must be positive, got {self.max_tuning_windows}")
