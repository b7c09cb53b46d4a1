from .param_config import ParamConfig
