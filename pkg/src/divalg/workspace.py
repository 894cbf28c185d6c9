"""Workspace: a validated algebra plus named, verified orders from a config."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import (
    AlgebraSpec,
    CyclicAlgebra,
    DivisionSanityReport,
    MatrixAlgebra,
    QuaternionAlgebra,
    division_sanity,
)
from .config import (
    ConfigError,
    RunConfig,
    Section,
    parse_config,
    parse_float,
    parse_fraction,
    parse_int,
    parse_int_list,
    parse_matrix,
)
from .cubicfield import CubicFieldSpec
from .exactmat import Mat
from .geometry import BasePoint
from .orders import Order, OrderError, congruence_order, order_index


@dataclass
class OrderInfo:
    order: Order
    discriminant: int
    constructed: str  # "basis" or "congruence"
    level: int | None
    base: str | None


@dataclass
class Workspace:
    spec: AlgebraSpec
    orders: dict[str, OrderInfo]
    division: DivisionSanityReport | None
    config: RunConfig

    def order(self, name: str) -> Order:
        if name not in self.orders:
            raise ConfigError(f"no order named {name!r} in the workspace")
        return self.orders[name].order

    def summary(self) -> dict:
        disc_table = {name: info.discriminant for name, info in self.orders.items()}
        out = {
            "algebra": self.spec.describe(),
            "degree": self.spec.n,
            "division_attested": self.spec.division_attested,
            "orders": disc_table,
        }
        if self.division is not None:
            out["division_sanity"] = {
                "passed": self.division.passed,
                "checked": self.division.checked,
                "height": self.division.height,
                "witness": [str(c) for c in self.division.witness.coords]
                if self.division.witness
                else None,
            }
        return out


def build_algebra(sec: Section) -> AlgebraSpec:
    kind = sec.require("type")
    attested = sec.get("division_attested", "false").lower() in ("true", "1", "yes")
    note = sec.get("attestation", "")
    if kind == "quaternion":
        return QuaternionAlgebra(
            a=parse_fraction(sec.require("a"), sec.line_of("a")),
            b=parse_fraction(sec.require("b"), sec.line_of("b")),
            division_attested=attested,
            attestation=note,
        )
    if kind == "cyclic3":
        f = parse_int_list(sec.require("f"), sec.line_of("f"))
        sigma = parse_int_list(sec.require("sigma"), sec.line_of("sigma"))
        if len(f) != 4:
            raise ConfigError("f must list 4 ascending coefficients", sec.line_of("f"))
        if len(sigma) != 3:
            raise ConfigError("sigma must list 3 ascending coefficients", sec.line_of("sigma"))
        cubic = CubicFieldSpec(
            f=tuple(f),
            sigma=tuple(sigma),
            root_index=parse_int(sec.get("root_index", "0"), sec.line),
        )
        return CyclicAlgebra(
            cubic=cubic,
            b=parse_fraction(sec.require("b"), sec.line_of("b")),
            division_attested=attested,
            attestation=note,
        )
    if kind == "matrix":
        return MatrixAlgebra(n=parse_int(sec.require("n"), sec.line_of("n")))
    raise ConfigError(f"unknown algebra type {kind!r}", sec.line)


def build_workspace(text: str, run_division_sanity: bool = False) -> Workspace:
    """Parse, validate and assemble a workspace from config text.

    Order sections are processed in declaration order; a congruence order
    may reference any previously defined order as its base.  Expected
    discriminants and indices, when declared, are checked exactly.
    """
    config = parse_config(text)
    if config.algebra is None:
        raise ConfigError("no algebra defined")
    spec = build_algebra(config.algebra)

    division = None
    if run_division_sanity:
        height_default = "2" if spec.dim <= 4 else "1"
        height = parse_int(
            (config.run.get("sanity_height", height_default) if config.run else height_default)
        )
        division = division_sanity(spec, height)
        if spec.division_attested and not division.passed:
            raise ConfigError(
                "division_attested is set but a norm-zero witness exists: "
                f"{[str(c) for c in division.witness.coords]}"
            )

    orders: dict[str, OrderInfo] = {}
    for sec in config.orders:
        construct = sec.get("construct", "basis")
        try:
            if construct == "basis":
                rows = parse_matrix(sec.require("basis"), sec.line_of("basis"))
                order = Order(spec, Mat(rows), name=sec.name)
                info = OrderInfo(
                    order=order,
                    discriminant=order.discriminant,
                    constructed="basis",
                    level=None,
                    base=None,
                )
            elif construct == "o0n":
                base_name = sec.require("base")
                if base_name not in orders:
                    raise ConfigError(
                        f"base order {base_name!r} is not defined above", sec.line
                    )
                level = parse_int(sec.require("level"), sec.line_of("level"))
                order = congruence_order(orders[base_name].order, level, name=sec.name)
                info = OrderInfo(
                    order=order,
                    discriminant=order.discriminant,
                    constructed="congruence",
                    level=level,
                    base=base_name,
                )
            else:
                raise ConfigError(f"unknown construct {construct!r}", sec.line)
        except OrderError as exc:
            raise ConfigError(f"order {sec.name!r}: {exc}", sec.line) from exc

        expected = sec.get("expected_disc")
        if expected is not None and info.discriminant != parse_int(expected, sec.line):
            raise ConfigError(
                f"order {sec.name!r} has discriminant {info.discriminant}, "
                f"expected {expected}",
                sec.line_of("expected_disc"),
            )
        expected_idx = sec.get("expected_index_in")
        if expected_idx is not None:
            sup_name, idx_text = expected_idx.split()
            rel = order_index(info.order, orders[sup_name].order)
            if rel.index != parse_int(idx_text, sec.line):
                raise ConfigError(
                    f"order {sec.name!r} has index {rel.index} in {sup_name}, "
                    f"expected {idx_text}",
                    sec.line_of("expected_index_in"),
                )
        orders[sec.name] = info

    return Workspace(spec=spec, orders=orders, division=division, config=config)


def base_point_from_text(text: str, n: int) -> BasePoint:
    """Parse a base point: 'x,y' upper-half coordinates (degree 2) or a matrix."""
    text = text.strip()
    if ";" not in text and "," in text:
        x_txt, y_txt = text.split(",", 1)
        if n != 2:
            raise ConfigError("upper-half coordinates only make sense in degree 2")
        return BasePoint.upper_half(parse_float(x_txt), parse_float(y_txt))
    rows = [[parse_float(e) for e in row.split()] for row in text.split(";")]
    mat = np.array(rows)
    if mat.shape != (n, n):
        raise ConfigError(f"base point must be {n}x{n}")
    return BasePoint.from_matrix(mat)
