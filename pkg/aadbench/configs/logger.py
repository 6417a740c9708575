from typing import Optional

from aadbench.configs.base import Config

LOGGER_NAMES = ('wandb',)


class LoggerConfig(Config):

    def __init__(
        self,
        logger_name: str = 'wandb',
        enable_logging: bool = False,
        user: Optional[str] = None,
        project: str = 'aadbench',
        resume: bool = False,
        display_name: Optional[str] = None,
    ):

        super().__init__()
        self.logger_name = logger_name
        self.enable_logging = enable_logging
        self.user = user
        self.project = project
        self.resume = resume
        self.display_name = display_name
        self._post_init()

    def _post_init(self):
        self._require(self.logger_name in LOGGER_NAMES, 'logger_name',
                      f"logger {self.logger_name} not available, choose from {LOGGER_NAMES}")
