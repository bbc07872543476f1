"""
Deterministic DRAM rowhammer simulator with the B-CATT and G-CATT software defenses.
"""

__version__ = "0.1.0"
