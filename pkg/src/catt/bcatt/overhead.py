from pydantic import BaseModel, ConfigDict, Field

from catt.bcatt.blacklist import Blacklist
from catt.dram.geometry import DramGeometry


def format_percentage(fraction: float, decimals: int = 4) -> str:
    """
    Render a fraction as a percentage string, e.g. 0.0000634 -> '0.0063%'.
    """
    return f"{fraction * 100:.{decimals}f}%"


class OverheadReport(BaseModel):
    """
    Memory lost to blacklisting.

    Attributes:
        blacklisted (int): Blacklisted frames.
        total_frames (int): Frames of the machine.
        fraction (float): blacklisted / total_frames.
    """

    model_config = ConfigDict(frozen=True)

    blacklisted: int = Field(..., ge=0)
    total_frames: int = Field(..., ge=1)
    fraction: float = Field(..., ge=0.0, le=1.0)

    @property
    def percentage(self) -> str:
        return format_percentage(self.fraction)

    def table(self, label: str = "") -> str:
        """
        Fixed-width table of one machine: label, vulnerable pages, total pages, overhead.
        """
        header = f"{'Machine':<10}{'# vuln. pages':>16}{'# total pages':>16}{'Overhead':>12}"
        row = f"{label:<10}{self.blacklisted:>16,}{self.total_frames:>16,}{self.percentage:>12}"
        return f"{header}\n{row}\n"


def overhead_report(blacklist: Blacklist, geometry: DramGeometry) -> OverheadReport:
    return OverheadReport(
        blacklisted=len(blacklist),
        total_frames=geometry.total_frames,
        fraction=len(blacklist) / geometry.total_frames,
    )
