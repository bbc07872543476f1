from logging import getLogger
from pathlib import Path
from typing import List

from catt.statistics.export import ResultFile, load_result, render_comparison
from catt.statistics.manifest import check_same_geometry

logger = getLogger(__name__)


def merge_results(result_files: List[ResultFile]) -> str:
    """
    Comparison table of results obtained on the same geometry.

    Args:
        result_files (List[ResultFile]): At least one result.

    Returns:
        str: Fixed-width table, one row per input in the given order.

    Raises:
        ValueError: If no result is given.
        DigestMismatchError: If the results were produced on different geometries.
    """
    if not result_files:
        raise ValueError("At least one result is required")
    digest = check_same_geometry([result_file.manifest for result_file in result_files])
    logger.debug("Merging %d results of geometry %s", len(result_files), digest[:12])
    return render_comparison([result_file.result for result_file in result_files])


def report(paths: List[Path]) -> str:
    return merge_results([load_result(path) for path in paths])
