from .version import __version__


__all__ = [
    "analysis",
    "errors",
    "logger",
    "main",
    "models",
    "parser",
    "pipeline",
    "solver",
    "utils",
    "__version__",
]
