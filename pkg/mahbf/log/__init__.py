from .logging import logger

__all__ = ["logger"]
