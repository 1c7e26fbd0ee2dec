# Utilities module
from .system_utils import SystemManager
