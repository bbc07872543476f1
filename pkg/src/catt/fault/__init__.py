from catt.fault.cell import Sidedness, VulnerabilityProfile, VulnerableCell
from catt.fault.profile import load_profile, store_profile
from catt.fault.state import DramState, FlipEvent
from catt.fault.synth import synthesize_profile


__all__ = [
    "DramState",
    "FlipEvent",
    "Sidedness",
    "VulnerabilityProfile",
    "VulnerableCell",
    "load_profile",
    "store_profile",
    "synthesize_profile",
]
