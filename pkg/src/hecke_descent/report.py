"""Deterministic JSON and text renderings of a DescentReport."""

from __future__ import annotations

import json
from fractions import Fraction


def _num(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _label(label):
    return label if isinstance(label, (str, int)) else str(label)


def _cycle_list(wl):
    return [{"label": _label(k), "coeff": _num(v)} for k, v in wl.items()]


def report_dict(rep):
    """Plain data in a fixed key order; the first ten keys form the public schema."""
    out = {
        "scenario": rep.scenario,
        "ell": rep.ell,
        "precision": rep.precision,
        "classes": [
            {"rep": c.rep, "deg": c.deg, "c": c.c, "e": c.e, "card_A": c.card_A,
             "card_B": c.card_B, "weight": _num(c.weight),
             "names": list(c.names), "size": c.size,
             "method_a": c.method_a, "method_b": c.method_b,
             "shortcut": dict(sorted(c.shortcut.items()))}
            for c in rep.classes
        ],
        "naive_count": rep.naive_count,
        "descent_count": _num(rep.descent_count),
        "equal": rep.equal,
        "timings": dict(sorted(rep.timings.items())),
        "descent_list": _cycle_list(rep.descent_list),
        "a_variant_list": _cycle_list(rep.a_variant_list),
        "naive_list": _cycle_list(rep.naive_list),
        "x_list": _cycle_list(rep.x_list) if rep.x_list is not None else [],
        "certificate": rep.certificate,
        "params": rep.params,
        "notes": list(rep.notes),
    }
    return out


def emit_report(rep, fmt="json"):
    if fmt == "json":
        return (json.dumps(report_dict(rep), indent=2, sort_keys=False) + "\n").encode()
    if fmt == "text":
        return render_text(rep).encode()
    raise ValueError(f"unknown format {fmt!r}")


def render_text(rep):
    d = report_dict(rep)
    lines = [f"scenario   {d['scenario']}"]
    if d["ell"] is not None:
        lines.append(f"ell        {d['ell']}")
        lines.append(f"precision  {d['precision']}")
    header = ("class", "size", "deg", "c", "e", "|A|", "|B|", "weight", "rep")
    rows = []
    for i, c in enumerate(d["classes"]):
        name = ",".join(c["names"]) or str(i)
        rows.append((name, str(c["size"]), str(c["deg"]), str(c["c"]), str(c["e"]),
                     str(c["card_A"]), str(c["card_B"]), str(c["weight"]), c["rep"]))
    widths = [max(len(r[k]) for r in [header] + rows) for k in range(len(header) - 1)]

    def fmt_row(r):
        return "  ".join(x.ljust(w) for x, w in zip(r[:-1], widths)) + "  " + r[-1]

    lines.append(fmt_row(header).rstrip())
    lines.extend(fmt_row(r).rstrip() for r in rows)
    lines.append(f"naive_count    {d['naive_count']}")
    lines.append(f"descent_count  {d['descent_count']}")
    lines.append(f"equal          {str(d['equal']).lower()}")
    if d["certificate"].get("checked_at"):
        a, b = d["certificate"]["checked_at"]
        lines.append(f"stable at precisions {a} and {b}")
    for k, v in d["timings"].items():
        lines.append(f"{k}  {v}")
    return "\n".join(lines) + "\n"


__all__ = ["emit_report", "report_dict", "render_text"]
