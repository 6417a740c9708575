import os
import time
import logging

import pandas as pd

from typing import Any, Dict, List, Optional

from aadbench.configs.base import Config
from aadbench.configs.logger import LoggerConfig
from aadbench.utils.runtime import flatten
from aadbench.utils.exceptions import ConfigError

try:
    import wandb
except ImportError:
    wandb = None

console = logging.getLogger(__name__)


class WandbLogger:
    """ Optional experiment tracking; every call is a no-op unless logging is enabled. """

    def __init__(
            self,
            enable_logging: bool,
            user: Optional[str],
            project: str,
            resume: bool,
            display_name: Optional[str] = None,
            config: Optional[Dict[str, Any]] = None
    ):
        if enable_logging and wandb is None:
            raise ConfigError("Logging is enabled but wandb is not installed; install aadbench[wandb]")
        self.enable_logging = enable_logging
        self.user = user
        self.project = project
        self.resume = resume
        self.display_name = None
        self.config = config
        self.run_id = None
        self.run = None

        self.set_run_id()
        self.set_display_name(display_name)

    def set_run_id(self, run_id: Optional[str] = None):
        if run_id is None and wandb is not None:
            run_id = wandb.util.generate_id()
        self.run_id = run_id

    def set_display_name(self, display_name: str = None):
        if display_name is not None:
            self.display_name = display_name
        else:
            self.display_name = os.environ.get('SLURM_JOB_NAME', time.strftime("%Y%m%d-%H%M%S"))

    def store_configs(self, *config_list: Config):
        if self.config is None:
            self.config = {}
        for config in config_list:
            if config is not None:
                self.config[config.__class__.__name__.lower()] = config.to_dict()

    def init_run(self):
        if self.enable_logging and self.run is None:
            self.run = wandb.init(
                entity=self.user, project=self.project, resume=self.resume, name=self.display_name,
                config=flatten(self.config) if self.config else None, id=self.run_id, reinit=True)
            console.info(f"Tracking run {self.run_id} in project {self.project}")

    def log(self, log: dict):
        if self.enable_logging:
            self.run.log(log)

    def log_curves(self, records: List[Dict[str, Any]]) -> None:
        """ Logs accuracy-curve rows (algorithm, subject, tau, accuracy, ...) as a table. """
        if self.enable_logging and len(records) > 0:
            self.run.log({"curves": wandb.Table(dataframe=pd.DataFrame.from_records(records))})

    def log_diagnostics(self, algorithm: str, records: List[Dict[str, Any]]) -> None:
        """ Logs per-fold decoder diagnostics, e.g. NN-SR loss histories, as one table per algorithm. """
        if self.enable_logging and len(records) > 0:
            self.run.log({f"diagnostics/{algorithm}": wandb.Table(dataframe=pd.DataFrame.from_records(records))})

    def finish(self):
        if self.enable_logging and self.run is not None:
            self.run.finish()
            self.run = None

    @classmethod
    def from_config(cls, config: LoggerConfig, display_name: str = None):
        display_name = display_name if display_name is not None else config.display_name
        return cls(
            enable_logging=config.enable_logging, user=config.user, project=config.project, resume=config.resume,
            display_name=display_name
        )
