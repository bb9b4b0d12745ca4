"""Text format for bracket rules.

    constructionA q=2 d=1 f=[x^-1]

    orbit q=2 d=3
    rule 1 2 0 target=tail=0,0,0; 0:0,0,1; 1:0,0,1

    conjugate u=[1,0;0,x^-1]

``#`` starts a comment.  ``conjugate`` lines wrap everything above them.
Matrix entries are Laurent polynomials where x^e reads the cell at offset e,
so the right shift s is ``x^-1``.
"""

from __future__ import annotations

import re

from ..shift_space import format_config, format_matrix, parse_config, parse_matrix
from .rules import BracketRule, Conjugated, ConstructionA, OrbitRule, OrbitRules


class RuleFileError(ValueError):
    pass


def _fields(text: str) -> dict[str, str]:
    out = {}
    for m in re.finditer(r"(\w+)=(\[[^\]]*\]|\S+)", text):
        out[m.group(1)] = m.group(2)
    return out


def parse_rule_text(text: str) -> BracketRule:
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise RuleFileError("empty rule file")
    rule: BracketRule | None = None
    orbit_hdr = None
    orbit_rules: list[OrbitRule] = []

    def close_orbit():
        nonlocal rule, orbit_hdr
        if orbit_hdr is not None:
            q, d = orbit_hdr
            rule = OrbitRules(d, q, tuple(orbit_rules))
            orbit_hdr = None

    try:
        for line in lines:
            head, _, rest = line.partition(" ")
            if head == "constructionA":
                if rule is not None or orbit_hdr is not None:
                    raise RuleFileError("only one base rule per file")
                f = _fields(rest)
                q, d = int(f["q"]), int(f["d"])
                ca = parse_matrix(f["f"], q)
                if ca.in_tracks != d:
                    raise RuleFileError(f"f has {ca.in_tracks} tracks, header says d={d}")
                rule = ConstructionA(ca)
            elif head == "orbit":
                if rule is not None or orbit_hdr is not None:
                    raise RuleFileError("only one base rule per file")
                f = _fields(rest)
                orbit_hdr = (int(f["q"]), int(f["d"]))
            elif head == "rule":
                if orbit_hdr is None:
                    raise RuleFileError("rule line outside an orbit block")
                nums, _, target = rest.partition("target=")
                s, t, delta = (int(v) for v in nums.split())
                q, d = orbit_hdr
                orbit_rules.append(OrbitRule(s, t, delta, parse_config(target, q, d)))
            elif head == "conjugate":
                close_orbit()
                if rule is None:
                    raise RuleFileError("conjugate before any base rule")
                rule = Conjugated(rule, parse_matrix(_fields(rest)["u"], rule.q))
            else:
                raise RuleFileError(f"unknown line {line!r}")
        close_orbit()
    except RuleFileError:
        raise
    except (KeyError, ValueError) as exc:
        raise RuleFileError(f"bad rule file: {exc}") from exc
    return rule


def format_rule(rule: BracketRule) -> str:
    if isinstance(rule, ConstructionA):
        return f"constructionA q={rule.q} d={rule.f.in_tracks} f={format_matrix(rule.f)}\n"
    if isinstance(rule, OrbitRules):
        out = [f"orbit q={rule.q} d={rule.d}\n"]
        for r in rule.rules:
            out.append(f"rule {r.s} {r.t} {r.delta} target={format_config(r.target)}\n")
        return "".join(out)
    return format_rule(rule.inner) + f"conjugate u={format_matrix(rule.u)}\n"
