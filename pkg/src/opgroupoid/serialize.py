"""JSON forms of the wire-facing objects.

Operators are row-major nested lists of [re, im] pairs; frames in column
form are lists of complex column vectors; endomorphism matrices use the
operator encoding (their vectorization convention is column major over
the n x k block, fixed by CornerBasis).  Gauge classes serialize by
their canonical invariant.
"""
from __future__ import annotations

import numpy as np

from .algebra import Algebra
from .algebroid import Section, poly_section
from .frames import FrameChartPoint, GaugeClass
from .groupoid import GroupoidChartPoint


def operator_to_json(x: np.ndarray) -> list:
    x = np.asarray(x, dtype=complex)
    return [[[float(v.real), float(v.imag)] for v in row] for row in x]


def operator_from_json(data) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in data], dtype=complex)


def columns_to_json(columns: np.ndarray) -> list:
    cols = np.asarray(columns, dtype=complex)
    return [[[float(v.real), float(v.imag)] for v in cols[:, j]] for j in range(cols.shape[1])]


def columns_from_json(data) -> np.ndarray:
    cols = [np.array([complex(re, im) for re, im in col], dtype=complex) for col in data]
    return np.stack(cols, axis=1)


def endomorphism_to_json(mat: np.ndarray) -> list:
    """Matrix of a linear map on the p0 ideal, in the operator encoding.

    Coordinates follow CornerBasis: column major over the n x k block.
    """
    return operator_to_json(mat)


def endomorphism_from_json(data) -> np.ndarray:
    return operator_from_json(data)


def section_to_json(x: Section) -> dict:
    if x.terms is None:
        raise ValueError("only polynomial sections serialize")
    return {"terms": [[operator_to_json(m) for m in t] for t in x.terms]}


def section_from_json(data) -> Section:
    return poly_section([tuple(operator_from_json(m) for m in t) for t in data["terms"]])


def gauge_class_to_json(alg: Algebra, c: GaugeClass) -> dict:
    return {"invariant": operator_to_json(c.invariant(alg))}


def gauge_class_from_json(alg: Algebra, p0: np.ndarray, data) -> GaugeClass:
    from .algebroid import canonical_frame
    from .groupoid import element

    x = element(alg, operator_from_json(data["invariant"]))
    xi = canonical_frame(alg, x.right, p0)
    return GaugeClass(x.op @ xi, xi)


def groupoid_chart_point_to_json(pt: GroupoidChartPoint) -> dict:
    return {
        "p_target": operator_to_json(pt.p_target),
        "p_source": operator_to_json(pt.p_source),
        "y_target": operator_to_json(pt.y_target),
        "z": operator_to_json(pt.z),
        "y_source": operator_to_json(pt.y_source),
    }


def groupoid_chart_point_from_json(data) -> GroupoidChartPoint:
    return GroupoidChartPoint(
        operator_from_json(data["p_target"]),
        operator_from_json(data["p_source"]),
        operator_from_json(data["y_target"]),
        operator_from_json(data["z"]),
        operator_from_json(data["y_source"]),
    )


def frame_chart_point_to_json(pt: FrameChartPoint) -> dict:
    return {
        "p": operator_to_json(pt.p),
        "y": operator_to_json(pt.y),
        "z": operator_to_json(pt.z),
    }


def frame_chart_point_from_json(data) -> FrameChartPoint:
    return FrameChartPoint(
        operator_from_json(data["p"]),
        operator_from_json(data["y"]),
        operator_from_json(data["z"]),
    )
