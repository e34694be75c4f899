from __future__ import annotations

import io
import re
from decimal import ROUND_CEILING, ROUND_FLOOR
from typing import List, TextIO, Union

from probnet_v1.core.intervals import format_endpoint
from probnet_v1.core.models import IndepDecl, IndepKind, ProbInterval
from probnet_v1.core.models.errors import (
    BoundsError,
    EmptyIntersection,
    InconsistentNetwork,
    KbSyntaxError,
    UnknownAtom,
)
from probnet_v1.logging_config import get_logger

from .engine import NAME_RE, Network

logger = get_logger(__name__)

_NAME = NAME_RE.pattern
_NUMBER = r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)"

ATOM_LINE = re.compile(rf"atom\s+({_NAME})")
COND_LINE = re.compile(
    rf"cond\s+({_NAME})\s*\|\s*({_NAME})\s*=\s*\[\s*({_NUMBER})\s*,\s*({_NUMBER})\s*\]"
)
INDEP_LINE = re.compile(rf"indep\s+(iii|ii|i)\s+({_NAME})\s*;\s*({_NAME})\s*;\s*({_NAME})")

MAX_FRACTION_DIGITS = 6


def _parse_number(token: str, line_no: int) -> float:
    _, _, fraction = token.partition(".")
    if len(fraction) > MAX_FRACTION_DIGITS:
        raise KbSyntaxError(line_no, f"'{token}' has more than {MAX_FRACTION_DIGITS} fraction digits")
    return float(token)


def _parse_bounds(lo_token: str, hi_token: str, line_no: int) -> ProbInterval:
    lo = _parse_number(lo_token, line_no)
    hi = _parse_number(hi_token, line_no)
    try:
        return ProbInterval(lo, hi)
    except BoundsError as exc:
        raise BoundsError(f"line {line_no}: {exc}") from None


def parse_kb(source: Union[str, TextIO], strict: bool = False) -> Network:
    """Build a Network from KB text.

    Lines are ``atom NAME``, ``cond T | G = [lo, hi]`` and
    ``indep KIND A ; B ; C``; ``#`` starts a comment. Repeated ``cond``
    lines for one ordered pair are intersected.
    """
    stream = io.StringIO(source) if isinstance(source, str) else source
    net = Network()
    n_cond = 0
    for line_no, raw in enumerate(stream, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue

        match = ATOM_LINE.fullmatch(line)
        if match:
            net.add_atom(match.group(1))
            continue

        match = COND_LINE.fullmatch(line)
        if match:
            target, given, lo_token, hi_token = match.groups()
            iv = _parse_bounds(lo_token, hi_token, line_no)
            t = net.add_atom(target).id
            g = net.add_atom(given).id
            if t == g:
                if iv.hi < 1.0:
                    raise KbSyntaxError(line_no, f"P({target}|{target}) is 1, not {iv.hi}")
                continue
            try:
                net.constrain(t, g, iv)
            except EmptyIntersection as exc:
                raise InconsistentNetwork(
                    f"line {line_no}: repeated bounds for P({target}|{given}) do not overlap",
                    witness={"arc": (target, given), "lo": exc.lo, "hi": exc.hi},
                ) from None
            n_cond += 1
            continue

        match = INDEP_LINE.fullmatch(line)
        if match:
            kind, *names = match.groups()
            if len(set(names)) != 3:
                raise KbSyntaxError(line_no, "independence needs three distinct atoms")
            ids: List[int] = []
            for name in names:
                if strict and not net.has_atom(name):
                    raise UnknownAtom(name, line_no)
                ids.append(net.add_atom(name).id)
            net.add_indep(IndepDecl(IndepKind(kind), tuple(ids)))
            continue

        keyword = line.split(None, 1)[0]
        if keyword in ("atom", "cond", "indep"):
            raise KbSyntaxError(line_no, f"malformed '{keyword}' line")
        raise KbSyntaxError(line_no, f"unknown directive '{keyword}'")

    logger.info(
        "Parsed KB: %d atoms, %d cond lines, %d independences", net.n, n_cond, len(net.indeps)
    )
    return net


def serialize_kb(net: Network) -> str:
    """Render the base part of ``net`` in KB syntax.

    Endpoints are rounded outward to 6 decimals so that a serialized
    saturated network stays a sound input.
    """
    base = net.base_atoms()
    lines = [f"atom {atom.name}" for atom in base]
    for target in base:
        for given in base:
            if target.id == given.id:
                continue
            iv = net.bound(target.id, given.id)
            if iv.is_vacuous:
                continue
            lo = format_endpoint(iv.lo, ROUND_FLOOR)
            hi = format_endpoint(iv.hi, ROUND_CEILING)
            lines.append(f"cond {target.name} | {given.name} = [{lo}, {hi}]")
    for decl in net.indeps:
        names = " ; ".join(net.atoms[i].name for i in decl.triple)
        lines.append(f"indep {decl.kind.value} {names}")
    return "\n".join(lines) + "\n"
