from typing import Optional

from config import DEFAULT_NODE_CAP
from models.dataset import Dataset
from models.summary import Summary
from mining.common import MinSupport
from mining.coreflow import mine_coreflow
from mining.sententree import mine_sententree
from mining.synopsis import SynopsisParams, mine_synopsis

TECHNIQUES = ("coreflow", "sententree", "synopsis")


def granularity_flag(technique: str) -> str:
    return "--lambda" if technique == "synopsis" else "--min-support"


def finer_first(technique: str, levels):
    """Granularity levels ordered from finer to coarser summaries."""
    return sorted(levels, reverse=(technique == "synopsis"))


def mine(d: Dataset, technique: str, granularity: float, node_cap: Optional[int] = DEFAULT_NODE_CAP) -> Summary:
    """Run one technique at one granularity (min support, or lambda for synopsis)."""
    if technique == "coreflow":
        return mine_coreflow(d, MinSupport(granularity))
    if technique == "sententree":
        return mine_sententree(d, MinSupport(granularity), node_cap=node_cap)
    if technique == "synopsis":
        return mine_synopsis(d, SynopsisParams.for_dataset(d, granularity))
    raise ValueError(f"Unknown technique '{technique}'. Use one of: {', '.join(TECHNIQUES)}.")
