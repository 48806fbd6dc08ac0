from .gateway import LlmClient, LlmExchange, ProviderConfig, load_provider_config
from .mock import FaultInjector, MockRule, MockScript, mock_client

__all__ = [
    "FaultInjector",
    "LlmClient",
    "LlmExchange",
    "MockRule",
    "MockScript",
    "ProviderConfig",
    "load_provider_config",
    "mock_client",
]
