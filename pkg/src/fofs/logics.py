"""Logic identifiers: one of six modal bases, each optionally with NI and/or ND."""
from __future__ import annotations

from dataclasses import dataclass

__all__ = ["LogicId", "BASES", "ALL_LOGICS"]

BASES = ("FS", "FS-D", "FS-4", "FS-D4", "FS-T", "FS-S4")

# extra modal axioms per base, in addition to the FOFS axioms
_EXTRA_AXIOMS = {
    "FS": (),
    "FS-D": ("D",),
    "FS-4": ("4-BOX", "4-DIA"),
    "FS-D4": ("D", "4-BOX", "4-DIA"),
    "FS-T": ("T-BOX", "T-DIA"),
    "FS-S4": ("T-BOX", "T-DIA", "4-BOX", "4-DIA"),
}

_MODAL_CONDITIONS = {
    "FS": frozenset(),
    "FS-D": frozenset({"serial"}),
    "FS-4": frozenset({"transitive"}),
    "FS-D4": frozenset({"serial", "transitive"}),
    "FS-T": frozenset({"reflexive"}),
    "FS-S4": frozenset({"reflexive", "transitive"}),
}

BASE_AXIOMS = ("INT", "KB-a", "KB-b", "KD-a", "KD-b", "FS1", "FS2", "UNIV", "EXIST",
               "FORALL-ANT", "FORALL-CON", "ID-REF", "ID-SUB")


@dataclass(frozen=True, order=True)
class LogicId:
    base: str = "FS"
    identity: frozenset = frozenset()

    def __post_init__(self):
        if self.base not in BASES:
            raise ValueError(f"unknown base logic {self.base!r}")
        ident = frozenset(self.identity)
        if not ident <= {"NI", "ND"}:
            raise ValueError(f"identity flags must be among NI, ND: {sorted(ident)}")
        object.__setattr__(self, "identity", ident)

    @classmethod
    def parse(cls, token: str) -> "LogicId":
        """Parse a class token such as ``fs-s4+ni+nd`` (case-insensitive)."""
        parts = token.strip().upper().split("+")
        base, flags = parts[0], parts[1:]
        if len(set(flags)) != len(flags):
            raise ValueError(f"repeated identity flag in {token!r}")
        if flags not in ([], ["NI"], ["ND"], ["NI", "ND"]):
            raise ValueError(f"bad identity suffix in {token!r}; use +ni, +nd or +ni+nd")
        return cls(base, frozenset(flags))

    @property
    def token(self) -> str:
        suffix = "".join(f"+{f.lower()}" for f in ("NI", "ND") if f in self.identity)
        return self.base.lower() + suffix

    def __str__(self):
        return self.token

    @property
    def ni(self) -> bool:
        return "NI" in self.identity

    @property
    def nd(self) -> bool:
        return "ND" in self.identity

    @property
    def modal_conditions(self) -> frozenset:
        return _MODAL_CONDITIONS[self.base]

    def axioms(self) -> tuple[str, ...]:
        names = BASE_AXIOMS + _EXTRA_AXIOMS[self.base]
        if self.ni:
            names += ("NI",)
        if self.nd:
            names += ("ND",)
        return names


ALL_LOGICS = tuple(LogicId(b, frozenset(f)) for b in BASES
                   for f in ((), ("NI",), ("ND",), ("NI", "ND")))
