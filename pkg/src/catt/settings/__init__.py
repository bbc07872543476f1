from catt.settings.root import Settings


__all__ = [
    "Settings",
]
