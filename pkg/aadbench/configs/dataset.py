from typing import Any, Dict, Optional, Union

from aadbench.configs.base import Config
from aadbench.configs.synth import SynthConfig

DATASET_NAMES = ('directory', 'synthetic')


class DatasetConfig(Config):

    def __init__(
        self,
        dataset_name: str = 'directory',
        path: Optional[str] = None,
        synth: Optional[Union[Dict[str, Any], SynthConfig]] = None,
    ):
        super().__init__()
        self.dataset_name = dataset_name
        self.path = path
        self.synth = SynthConfig.from_dict(synth) if isinstance(synth, dict) else synth
        self._post_init()

    def _post_init(self):
        self._require(self.dataset_name in DATASET_NAMES, 'dataset_name',
                      f"choose from {DATASET_NAMES}, got {self.dataset_name}")
        if self.dataset_name == 'directory':
            self._require(self.path is not None, 'path', "a dataset directory is required")
        if self.dataset_name == 'synthetic' and self.synth is None:
            self.synth = SynthConfig()
