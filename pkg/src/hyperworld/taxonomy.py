"""Boolean encodings of two game-versus-simulator rubrics.

The seven-characteristic rubric compares a profile against three columns
(Game, SimulationGame, TrainingSimulator). Cells that only say something is
*possible* never disqualify. The intent rubric is a chain of nested sets:
TrainingSimulation inside SeriousGame inside Game.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from importlib import resources
from pathlib import Path
from typing import Callable

from .errors import IncompleteProfile, InvalidParameter

CATEGORIES = ("Game", "SimulationGame", "TrainingSimulator")
JW_LEVELS = ("NotAGame", "Game", "SeriousGame", "TrainingSimulation")

ROW_NAMES = (
    "Involves simulation",
    "Imaginative experience",
    "Entertaining, fun & engaging",
    "Skills development",
    "Type of challenge",
    "Gestalt",
    "Goal-oriented",
)


@dataclass(frozen=True)
class EnvironmentProfile:
    has_virtual_environment: bool
    interactive_simulation: bool
    fictitious_environment: bool
    real_world_recreation_only: bool
    intended_entertaining: bool
    provides_engaging_challenges: bool
    app_specific_skill_dev_primary: bool
    continuous_intelligent_challenge: bool
    challenges_match_real_world: bool
    gameplay_patterns_present: bool
    invariant_standard_procedures: bool
    goal_oriented_activity: bool
    end_state_present: bool
    closed_formal_system: bool
    represents_subset_of_reality: bool
    primary_goal_education: bool
    resembles_user_reality_skills: bool

    def __post_init__(self):
        for f in fields(self):
            if not isinstance(getattr(self, f.name), bool):
                raise InvalidParameter(f"{f.name} must be a boolean")
        if self.real_world_recreation_only and self.fictitious_environment:
            raise InvalidParameter("real_world_recreation_only and fictitious_environment are mutually exclusive")

    @classmethod
    def field_names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))

    @classmethod
    def from_dict(cls, data: dict) -> "EnvironmentProfile":
        names = cls.field_names()
        missing = [k for k in names if k not in data]
        extra = sorted(k for k in data if k not in names)
        if missing or extra:
            raise IncompleteProfile(missing, extra)
        return cls(**{k: data[k] for k in names})

    @classmethod
    def from_json(cls, text: str) -> "EnvironmentProfile":
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        return asdict(self)


Row = Callable[[EnvironmentProfile], bool]


def _involves_simulation(p):
    return p.has_virtual_environment and p.interactive_simulation


def _always(p):
    return True


_GAME_ROWS: tuple[Row, ...] = (
    _involves_simulation,
    _always,  # fictitious environment is optional
    lambda p: p.intended_entertaining and p.provides_engaging_challenges,
    lambda p: not p.app_specific_skill_dev_primary,
    lambda p: p.continuous_intelligent_challenge,
    lambda p: p.gameplay_patterns_present,
    lambda p: p.goal_oriented_activity and p.end_state_present,
)

_SIM_GAME_ROWS: tuple[Row, ...] = _GAME_ROWS[:6] + (
    lambda p: p.goal_oriented_activity and not p.end_state_present,
)

_SIMULATOR_ROWS: tuple[Row, ...] = (
    _involves_simulation,
    lambda p: p.real_world_recreation_only,
    lambda p: not p.intended_entertaining,  # operator may still enjoy it
    lambda p: p.app_specific_skill_dev_primary,
    lambda p: p.challenges_match_real_world,
    lambda p: p.invariant_standard_procedures,
    lambda p: not p.goal_oriented_activity and not p.end_state_present,
)

COLUMNS: dict[str, tuple[Row, ...]] = {
    "Game": _GAME_ROWS,
    "SimulationGame": _SIM_GAME_ROWS,
    "TrainingSimulator": _SIMULATOR_ROWS,
}


@dataclass(frozen=True)
class NarayanasamyResult:
    rows: dict  # category -> tuple of 7 booleans
    overall: str | None

    @property
    def satisfied(self) -> dict:
        return {c: all(r) for c, r in self.rows.items()}

    def failing_rows(self, category: str) -> list[str]:
        return [ROW_NAMES[i] for i, ok in enumerate(self.rows[category]) if not ok]


@dataclass(frozen=True)
class Verdict:
    narayanasamy: NarayanasamyResult
    johnston_whitehead: str

    def to_dict(self) -> dict:
        n = self.narayanasamy
        return {
            "narayanasamy": {
                "overall": n.overall,
                "satisfied": n.satisfied,
                "rows": {c: list(r) for c, r in n.rows.items()},
                "failing_rows": {c: n.failing_rows(c) for c in CATEGORIES},
            },
            "johnston_whitehead": self.johnston_whitehead,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        n = self.narayanasamy
        lines = [f"Narayanasamy: {n.overall}; J&W: {self.johnston_whitehead}", ""]
        for c in CATEGORIES:
            failing = n.failing_rows(c)
            lines.append(f"  {c:<18} " + ("all rows match" if not failing else "fails: " + "; ".join(failing)))
        return "\n".join(lines)


def _check(profile) -> EnvironmentProfile:
    if isinstance(profile, dict):
        return EnvironmentProfile.from_dict(profile)
    if not isinstance(profile, EnvironmentProfile):
        raise TypeError("expected an EnvironmentProfile or a dict")
    return profile


def classify_narayanasamy(profile) -> NarayanasamyResult:
    p = _check(profile)
    rows = {c: tuple(bool(row(p)) for row in COLUMNS[c]) for c in CATEGORIES}
    matching = [c for c in CATEGORIES if all(rows[c])]
    return NarayanasamyResult(rows, matching[0] if len(matching) == 1 else None)


def classify_johnston_whitehead(profile) -> str:
    p = _check(profile)
    if not (p.closed_formal_system and p.represents_subset_of_reality):
        return "NotAGame"
    if not p.primary_goal_education:
        return "Game"
    if not p.resembles_user_reality_skills:
        return "SeriousGame"
    return "TrainingSimulation"


def jw_at_least(verdict: str, level: str) -> bool:
    return JW_LEVELS.index(verdict) >= JW_LEVELS.index(level)


def classify(profile) -> Verdict:
    p = _check(profile)
    return Verdict(classify_narayanasamy(p), classify_johnston_whitehead(p))


def bundled_profiles() -> list[str]:
    root = resources.files("hyperworld") / "profiles"
    return sorted(e.name.removesuffix("_profile.json") for e in root.iterdir() if e.name.endswith("_profile.json"))


def load_profile(name_or_path: "str | Path") -> EnvironmentProfile:
    """Load a profile from a JSON file, or by bundled name (``sl`` or ``sl_profile.json``)."""
    path = Path(name_or_path)
    if path.is_file():
        return EnvironmentProfile.from_json(path.read_text())
    stem = path.name.removesuffix(".json").removesuffix("_profile")
    bundled = resources.files("hyperworld") / "profiles" / f"{stem}_profile.json"
    if not bundled.is_file():
        raise FileNotFoundError(f"no profile file or bundled profile named {str(name_or_path)!r}")
    return EnvironmentProfile.from_json(bundled.read_text())
