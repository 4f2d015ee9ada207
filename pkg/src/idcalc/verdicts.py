"""Three-valued verdicts.

A numeric procedure on an unbounded domain can certify convergence, certify
divergence, or honestly give up.  `Verdict` carries the answer together with
the identifier of the rule or test that produced it and optional numeric
evidence (a diverging partial integral, a stalled trace, ...).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field


class Truth(enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Verdict:
    truth: Truth
    reason: str
    witness: dict = field(default_factory=dict)

    @staticmethod
    def yes(reason, **witness):
        return Verdict(Truth.YES, reason, dict(witness))

    @staticmethod
    def no(reason, **witness):
        return Verdict(Truth.NO, reason, dict(witness))

    @staticmethod
    def unknown(reason, **witness):
        return Verdict(Truth.UNKNOWN, reason, dict(witness))

    @property
    def is_yes(self):
        return self.truth is Truth.YES

    @property
    def is_no(self):
        return self.truth is Truth.NO

    @property
    def is_unknown(self):
        return self.truth is Truth.UNKNOWN

    def __bool__(self):  # pragma: no cover - guard against accidental truthiness
        raise TypeError("Verdict is three-valued; test .is_yes / .is_no explicitly")


def combine_all(*verdicts: Verdict) -> Verdict:
    """Conjunction: NO dominates, then UNKNOWN, else YES.

    The reason of the first non-YES verdict is propagated so callers can
    report which clause failed.
    """
    for v in verdicts:
        if v.is_no:
            return v
    for v in verdicts:
        if v.is_unknown:
            return v
    reasons = "+".join(v.reason for v in verdicts) if verdicts else "vacuous"
    return Verdict.yes(reasons)
