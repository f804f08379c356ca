"""
埋め込み結果とカスケード失敗の記録。
Result records shared by the embedders, the oracle diagnostics, the sweep and the CLI.
"""
from __future__ import annotations

from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field


class EmbedStatus(str, Enum):
    EMBEDDED = "EMBEDDED"
    # the guest does not embed and the host misses the degree hypothesis
    HYPOTHESIS_FAILED = "HYPOTHESIS_FAILED"
    # constructive method failed but brute force embeds the guest
    CONJECTURE_GAP = "CONJECTURE_GAP"
    # hypothesis holds and brute force finds nothing either
    COUNTEREXAMPLE = "COUNTEREXAMPLE"
    # the tree has more than k edges, so no claim is made
    NOT_EMBEDDABLE = "NOT_EMBEDDABLE"


class StrategyTrace(BaseModel):
    """Guard evaluation for one configuration of the diameter-5 cascade."""

    name: str
    guard: bool
    candidates: int = 0
    succeeded: bool = False
    # on success: how a V-side was divided between C and L
    split: Dict[str, List[int]] = Field(default_factory=dict)


class CascadeFailure(BaseModel):
    """Returned by the diameter-5 cascade when no configuration produced an embedding."""

    hypothesis: bool
    reduced: bool
    strategies: List[StrategyTrace]
    evidence: Dict[str, bool]
    partition: Dict[str, List[int]]


class RotationTrace(BaseModel):
    path: List[int]
    pivot: Optional[int] = None
    window: List[Tuple[int, int]] = Field(default_factory=list)
    aligned: bool = False


class EmbedResult(BaseModel):
    status: EmbedStatus
    method: str
    k: int
    hypothesis: bool
    embedding: Optional[List[Tuple[int, int]]] = None
    notes: List[str] = Field(default_factory=list)
    failure: Optional[CascadeFailure] = None
    rotations: List[RotationTrace] = Field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.status == EmbedStatus.EMBEDDED
