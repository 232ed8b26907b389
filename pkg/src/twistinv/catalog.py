"""The shipped catalog of system-spec files and a lazily built bundle of
all tables for one (W, theta) instance."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from importlib import resources
from pathlib import Path

from .cellcomplex import FacePoset, build_face_poset
from .coxeter import DEFAULT_ELEMENT_CAP, DEFAULT_ROOT_CAP, CoxeterMatrix, GroupTable, build_group
from .errors import SystemSpecError
from .poset import FinitePoset
from .twisted import (
    DiagramAutomorphism,
    GThetaGraph,
    TwistedTable,
    bruhat_poset_twisted,
    enumerate_twisted,
    g_theta_graph,
    read_system,
    weak_poset_twisted,
)

CATALOG_ORDER = (
    "A1", "A2", "A2-flip", "A3", "A3-flip", "A4", "A4-flip",
    "B2", "B3", "D4-swap", "I2-5", "I2-6", "I2-7", "I2-8", "H3",
    "A1xA1-swap", "A2xA2-swap", "B2xB2-swap",
)  # fmt: skip


@dataclass
class Instance:
    name: str
    cm: CoxeterMatrix
    theta: DiagramAutomorphism
    cap: int = DEFAULT_ELEMENT_CAP
    root_cap: int = DEFAULT_ROOT_CAP

    @cached_property
    def group(self) -> GroupTable:
        return build_group(self.cm, self.cap, self.root_cap)

    @cached_property
    def twisted(self) -> TwistedTable:
        return enumerate_twisted(self.group, self.theta)

    @cached_property
    def graph(self) -> GThetaGraph:
        return g_theta_graph(self.twisted)

    @cached_property
    def bruhat(self) -> FinitePoset:
        return bruhat_poset_twisted(self.group, self.twisted)

    @cached_property
    def weak(self) -> FinitePoset:
        return weak_poset_twisted(self.twisted)

    @cached_property
    def faces(self) -> FacePoset:
        return build_face_poset(self.twisted, self.graph)


def catalog_names() -> list[str]:
    return list(CATALOG_ORDER)


def _catalog_text(name: str) -> str:
    return resources.files("twistinv").joinpath("systems", f"{name}.json").read_text()


def load_instance(name_or_path: str, cap: int = DEFAULT_ELEMENT_CAP, root_cap: int = DEFAULT_ROOT_CAP) -> Instance:
    """A catalog name (e.g. ``A3-flip``) or a path to a system-spec file."""
    if name_or_path in CATALOG_ORDER:
        text = _catalog_text(name_or_path)
        name = name_or_path
    else:
        path = Path(name_or_path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise SystemSpecError(f"cannot read system spec {name_or_path!r}: {exc.strerror}") from None
        name = path.stem
    cm, theta = read_system(text)
    return Instance(name, cm, theta, cap, root_cap)


def load_catalog(cap: int = DEFAULT_ELEMENT_CAP, root_cap: int = DEFAULT_ROOT_CAP) -> list[Instance]:
    return [load_instance(name, cap, root_cap) for name in CATALOG_ORDER]
