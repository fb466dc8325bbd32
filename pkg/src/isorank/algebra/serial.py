"""JSON encodings for scalars, polynomials and matrices."""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Dict, Optional

from .fields import QI_TOWER, Alg, FieldError, Fp, Tower, field_tag, qi, sqrt_adjoin
from .poly import MultiPoly, PolyError


class SchemaError(ValueError):
    """Malformed JSON input (reported with the offending field)."""


def _frac_str(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s, where: str = "value") -> Fraction:
    try:
        if isinstance(s, bool):
            raise ValueError
        if isinstance(s, (int, str)):
            return Fraction(s)
    except (ValueError, ZeroDivisionError):
        pass
    raise SchemaError(f"{where}: expected a rational like '3/4', got {s!r}")


def scalar_to_json(x) -> Dict[str, Any]:
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, Fp):
        return {"re": _frac_str(x.v)}
    if isinstance(x, Alg):
        if x.tower.level == 0:
            return {"re": _frac_str(x.a), "im": _frac_str(x.b)}
        return {"a": scalar_to_json(x.a), "b": scalar_to_json(x.b), "sqrt": scalar_to_json(x.tower.square)}
    return {"re": _frac_str(x)}


class ScalarDecoder:
    """Decodes scalars, rebuilding one shared tower for all square roots met."""

    def __init__(self) -> None:
        self.tower: Tower = QI_TOWER

    def __call__(self, obj, where: str = "scalar"):
        if isinstance(obj, (int, str)) and not isinstance(obj, bool):
            return parse_rational(obj, where)
        if not isinstance(obj, dict):
            raise SchemaError(f"{where}: expected an object with 're'/'im'")
        if "sqrt" in obj:
            c = self(obj["sqrt"], where + ".sqrt")
            t, self.tower = sqrt_adjoin(c, self.tower)
            return self(obj.get("a", "0"), where + ".a") + self(obj.get("b", "0"), where + ".b") * t
        if "re" not in obj:
            raise SchemaError(f"{where}: missing 're'")
        re, im = obj["re"], obj.get("im", "0")
        if isinstance(re, float) or isinstance(im, float):
            return complex(float(re), float(im))
        return qi(parse_rational(re, where + ".re"), parse_rational(im, where + ".im"))


def poly_to_json(f: MultiPoly, field: Optional[str] = None, p: Optional[int] = None) -> Dict[str, Any]:
    if field is None:
        tags = {field_tag(c) for c in f.terms.values()}
        if any(t.startswith("Fp") for t in tags):
            field = "Fp"
            p = next(c.p for c in f.terms.values() if isinstance(c, Fp))
        elif tags <= {"Q"}:
            field = "Q"
        else:
            field = "QI"
    out: Dict[str, Any] = {"field": field}
    if field == "Fp":
        out["p"] = p
    out["arity"] = f.arity
    out["degree"] = f.degree
    terms = []
    for e, c in f.items():
        t: Dict[str, Any] = {"exp": list(e)}
        enc = scalar_to_json(c)
        if field in ("Q", "Fp") and "im" in enc and enc["im"] in ("0/1", 0.0):
            enc.pop("im")
        t.update(enc)
        terms.append(t)
    out["terms"] = terms
    return out


def poly_from_json(obj: Dict[str, Any], decoder: Optional[ScalarDecoder] = None) -> MultiPoly:
    dec = decoder or ScalarDecoder()
    if not isinstance(obj, dict):
        raise SchemaError("polynomial: expected a JSON object")
    for key in ("arity", "degree", "terms"):
        if key not in obj:
            raise SchemaError(f"polynomial: missing field '{key}'")
    fld = obj.get("field", "QI")
    if fld not in ("Q", "QI", "Fp"):
        raise SchemaError(f"field: unsupported value {fld!r}")
    p = obj.get("p")
    if fld == "Fp" and not isinstance(p, int):
        raise SchemaError("p: required integer prime for field Fp")
    arity, degree = obj["arity"], obj["degree"]
    terms = {}
    for k, t in enumerate(obj["terms"]):
        where = f"terms[{k}]"
        if "exp" not in t:
            raise SchemaError(f"{where}: missing 'exp'")
        e = tuple(t["exp"])
        if len(e) != arity or sum(e) != degree:
            raise SchemaError(f"{where}.exp: {list(e)} must have length {arity} and sum {degree}")
        if fld == "Fp":
            v = parse_rational(t.get("re", "0"), where + ".re")
            c = Fp(v.numerator * pow(v.denominator, -1, p), p)
        else:
            if fld == "Q" and "im" in t and parse_rational(t["im"], where + ".im") != 0:
                raise SchemaError(f"{where}.im: field Q does not allow imaginary parts")
            c = dec(t, where)
        terms[e] = terms[e] + c if e in terms else c
    try:
        return MultiPoly(arity, degree, terms)
    except PolyError as exc:
        raise SchemaError(str(exc)) from exc


def matrix_to_json(m) -> Dict[str, Any]:
    return {"size": len(m), "entries": [[scalar_to_json(x) for x in row] for row in m]}


def matrix_from_json(obj: Dict[str, Any], decoder: Optional[ScalarDecoder] = None) -> list:
    dec = decoder or ScalarDecoder()
    if not isinstance(obj, dict) or "entries" not in obj:
        raise SchemaError("matrix: missing field 'entries'")
    rows = [[dec(x, f"entries[{i}][{j}]") for j, x in enumerate(row)] for i, row in enumerate(obj["entries"])]
    size = obj.get("size", len(rows))
    if len(rows) != size or any(len(r) != size for r in rows):
        raise SchemaError(f"matrix: entries must be {size}x{size}")
    return rows


__all__ = [
    "SchemaError",
    "ScalarDecoder",
    "scalar_to_json",
    "poly_to_json",
    "poly_from_json",
    "matrix_to_json",
    "matrix_from_json",
    "parse_rational",
    "FieldError",
]
