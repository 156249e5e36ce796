"""
Report Schema Module

Pydantic models for the verification reports emitted by the descent checks and
consumed by the command line. A report names the claim it tests, the scenario
it ran on, its verdict, the p-adic precision its assertions were made at, and
witness data for every failure.

JSON uses the short scenario keys (``nR``, ``nS``, ``N``). Timings are left out
unless requested, so that two runs with the same seeds serialize identically.
"""

from enum import Enum
from typing import Any

import numpy as np
import sympy
from pydantic import BaseModel, ConfigDict, Field, model_validator


def jsonable(value: Any) -> Any:
    """Convert numpy scalars and arrays inside witness payloads to plain JSON values."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, np.integer):
        return int(value)
    return value


class Status(str, Enum):
    """
    Verdict of a single check.

    Attributes:
        PASSED: Every assertion held at the stated precision
        FAILED: Some assertion failed; witnesses are attached
        SKIPPED: The scenario violates a hypothesis of the claim
    """

    PASSED = "pass"
    FAILED = "fail"
    SKIPPED = "skipped"


class DescentScenario(BaseModel):
    """
    One configuration a claim is checked on.

    Attributes:
        group (str): Catalog name or presentation file path
        p (int): The residue characteristic
        n_R (int): Degree of the base residue field over F_p
        n_S (int): Degree of the extension residue field over F_p
        precision (int): N, the number of p-adic digits
        seed (int): Seed of every sampler used by the check
        samples (int): Number of random samples per property
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    group: str
    p: int = 3
    n_R: int = Field(1, alias="nR", ge=1)
    n_S: int = Field(2, alias="nS", ge=1)
    precision: int = Field(3, alias="N", ge=2)
    seed: int = 0
    samples: int = Field(20, ge=0, exclude=True)

    @model_validator(mode="after")
    def _check(self) -> "DescentScenario":
        if not sympy.isprime(self.p):
            msg = f"p = {self.p} is not a prime"
            raise ValueError(msg)
        if self.n_S % self.n_R:
            msg = f"nR = {self.n_R} does not divide nS = {self.n_S}"
            raise ValueError(msg)
        return self

    @property
    def degree(self) -> int:
        """n = [S : R]."""
        return self.n_S // self.n_R

    def key(self) -> tuple[str, int, int, int, int, int]:
        return (self.group, self.p, self.n_R, self.n_S, self.precision, self.seed)

    def label(self) -> str:
        return f"{self.group} p={self.p} nR={self.n_R} nS={self.n_S} N={self.precision}"


class VerificationReport(BaseModel):
    """
    Outcome of one claim on one scenario.

    Attributes:
        claim (str): Identifier of the claim tested
        status (Status): The verdict
        precision_used (int | None): Digits the assertions were made at
        witnesses (list[dict[str, Any]]): Counterexamples or computed data
        reason (str | None): Why a check was skipped
        runtime_ms (float | None): Wall time, when timings are kept
    """

    claim: str
    scenario: DescentScenario
    status: Status
    precision_used: int | None = None
    witnesses: list[dict[str, Any]] = Field(default_factory=list)
    reason: str | None = None
    runtime_ms: float | None = None

    @model_validator(mode="after")
    def _check(self) -> "VerificationReport":
        if self.status is Status.FAILED and not self.witnesses:
            msg = "a failed report must carry a witness"
            raise ValueError(msg)
        if self.status is Status.SKIPPED and not self.reason:
            msg = "a skipped report must state its reason"
            raise ValueError(msg)
        return self

    def render_text(self) -> str:
        head = f"[{self.status.value:>7}] {self.claim:<16} {self.scenario.label()}"
        if self.precision_used is not None:
            head += f" @p^{self.precision_used}"
        if self.reason:
            head += f" ({self.reason})"
        lines = [head]
        if self.status is Status.FAILED:
            lines.extend(f"          witness: {w}" for w in self.witnesses[:3])
        return "\n".join(lines)


class ReportBundle(BaseModel):
    """Reports of a sweep, ordered by scenario and claim."""

    reports: list[VerificationReport] = Field(default_factory=list)

    @model_validator(mode="after")
    def _order(self) -> "ReportBundle":
        self.reports.sort(key=lambda r: (r.scenario.key(), r.claim))
        return self

    @property
    def passed(self) -> bool:
        """True unless some check failed; skips do not count as failures."""
        return all(r.status is not Status.FAILED for r in self.reports)

    def counts(self) -> dict[str, int]:
        out = {s.value: 0 for s in Status}
        for r in self.reports:
            out[r.status.value] += 1
        return out

    def to_json(self, *, timings: bool = False) -> str:
        exclude = None if timings else {"reports": {"__all__": {"runtime_ms"}}}
        return self.model_dump_json(by_alias=True, indent=2, exclude=exclude)

    def render_text(self) -> str:
        counts = self.counts()
        summary = ", ".join(f"{v} {k}" for k, v in counts.items())
        return "\n".join([*(r.render_text() for r in self.reports), f"summary: {summary}"])


class GroupInfo(BaseModel):
    """Summary printed by ``group-info``."""

    name: str
    order: int
    classes: int
    class_sizes: list[int]
    representatives: list[str]
    abelianization: str
    center_order: int
    p: int
    p_regular_classes: list[str]

    def render_text(self) -> str:
        return "\n".join(
            [
                f"group:           {self.name}",
                f"order:           {self.order}",
                f"classes:         {self.classes} (sizes {self.class_sizes})",
                f"representatives: {', '.join(self.representatives)}",
                f"abelianization:  {self.abelianization}",
                f"center order:    {self.center_order}",
                f"{self.p}-regular:       {', '.join(self.p_regular_classes)}",
            ]
        )


class Sk1Info(BaseModel):
    """Summary printed by ``sk1``."""

    group: str
    p: int
    h2: str
    h2_ab: str
    sk1: str

    def render_text(self) -> str:
        return f"{self.group} at p={self.p}: H2 = {self.h2}, H2ab = {self.h2_ab}, SK1 = {self.sk1}"


class GammaInfo(BaseModel):
    """Gamma of a unit, one value per conjugacy class."""

    group: str
    p: int
    n: int
    N: int
    unit: str
    values: dict[str, list[int]]
    known_precision: int
    assertion_precision: int

    def render_text(self) -> str:
        lines = [f"Gamma({self.unit}) over {self.group}, p={self.p}, n={self.n}, N={self.N}"]
        lines += [f"  {label}: {coords}" for label, coords in self.values.items()]
        lines.append(f"  known mod p^{self.known_precision}, asserted mod p^{self.assertion_precision}")
        return "\n".join(lines)
