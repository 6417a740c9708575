import os
import json
import copy
from typing_extensions import Self
from typing import Dict, Any

from aadbench.utils.exceptions import ConfigError


CONFIG_NAME = 'config.json'


class Config:

    def __init__(self, **kwargs):
        for k, v in kwargs.items():
            setattr(self, k, v)

    def __getitem__(self, x):
        return getattr(self, x)

    def __repr__(self):
        return f"{self.__class__.__name__}({self.__dict__})"

    def save(self, save_directory: str) -> None:
        config_dict = self.to_dict()
        config_path = os.path.join(save_directory, CONFIG_NAME)
        with open(config_path, 'w') as f:
            json.dump(config_dict, f, indent=4)

    def to_dict(self) -> Dict[str, Any]:
        out = {}
        for key, value in self.__dict__.items():
            if key.startswith('_'):
                continue
            if isinstance(value, Config):
                value = value.to_dict()
            elif isinstance(value, list):
                value = [v.to_dict() if isinstance(v, Config) else copy.deepcopy(v) for v in value]
            else:
                value = copy.deepcopy(value)
            out[key] = value
        return out

    @classmethod
    def from_dict(cls, config_dict: Dict[str, Any]) -> Self:
        try:
            return cls(**config_dict)
        except TypeError as e:
            # unknown or missing keyword arguments surface as TypeError
            raise ConfigError(f"Invalid field for {cls.__name__}: {e}") from e

    @classmethod
    def from_config_file(cls, config_file_dir: str) -> Self:
        config_path = config_file_dir
        if os.path.isdir(config_file_dir) or not config_file_dir.endswith('.json'):
            config_path = os.path.join(config_file_dir, CONFIG_NAME)
        if not os.path.exists(config_path):
            raise FileNotFoundError(f"Configuration file {config_path} not found.")
        with open(config_path, 'r') as f:
            try:
                config_dict = json.load(f)
            except json.JSONDecodeError as e:
                raise ConfigError(f"Configuration file {config_path} is not valid JSON: {e}") from e
        return cls.from_dict(config_dict)

    @staticmethod
    def _require(condition: bool, field: str, message: str) -> None:
        if not condition:
            raise ConfigError(f"Invalid field `{field}`: {message}")
