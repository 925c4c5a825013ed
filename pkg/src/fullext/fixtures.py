"""Small hand-checkable environments used in docs, tests and the CLI demos.

The four ``panel_*`` environments have three states, three strategic types
and one behavioral type ``b``, one for each geometric regime:

* ``a`` -- all four beliefs convex independent;
* ``b`` -- strategic beliefs convex independent, ``b`` outside their hull,
  but one strategic belief inside the hull of the other three;
* ``c`` -- one strategic belief is the midpoint of the other two;
* ``d`` -- ``b`` sits at the centroid of the strategic triangle.
"""

from __future__ import annotations

from .auction import AuctionEnvironment
from .core import Environment, Kind, TypeRecord

S, B = Kind.STRATEGIC, Kind.BEHAVIORAL


def e1() -> Environment:
    return Environment(
        ["w1", "w2"],
        [TypeRecord("s1", S, "1", ["3/4", "1/4"]), TypeRecord("s2", S, "2", ["1/4", "3/4"])],
    )


def e2() -> Environment:
    return Environment(e1().states, e1().types + (TypeRecord("b", B, "0", ["9/10", "1/10"]),))


def e1_with_behavioral(valuation, belief=("1/2", "1/2")) -> Environment:
    return Environment(e1().states, e1().types + (TypeRecord("b", B, valuation, list(belief)),))


def _panel(beliefs, values=("1", "2", "3", "3/2")) -> Environment:
    ids = ["s1", "s2", "s3", "b"]
    kinds = [S, S, S, B]
    return Environment(
        ["w1", "w2", "w3"],
        [TypeRecord(i, k, v, p) for i, k, v, p in zip(ids, kinds, values, beliefs)],
    )


def panel_a() -> Environment:
    return _panel([["3/5", "1/5", "1/5"], ["1/5", "3/5", "1/5"], ["1/5", "1/5", "3/5"], ["0", "1/2", "1/2"]])


def panel_b() -> Environment:
    return _panel([["2/3", "1/6", "1/6"], ["1/6", "2/3", "1/6"], ["1/3", "1/3", "1/3"], ["1/6", "1/6", "2/3"]])


def panel_c() -> Environment:
    return _panel([["2/3", "1/6", "1/6"], ["1/6", "2/3", "1/6"], ["5/12", "5/12", "1/6"], ["1/6", "1/6", "2/3"]])


def panel_d() -> Environment:
    return _panel([["2/3", "1/6", "1/6"], ["1/6", "2/3", "1/6"], ["1/6", "1/6", "2/3"], ["1/3", "1/3", "1/3"]])


PANELS = {"a": panel_a, "b": panel_b, "c": panel_c, "d": panel_d}


def two_bidder_auction(behavioral=None) -> AuctionEnvironment:
    """Symmetric two-bidder prior on {1, 2}: matching valuations twice as likely."""
    prior = {("1", "1"): "1/3", ("1", "2"): "1/6", ("2", "1"): "1/6", ("2", "2"): "1/3"}
    return AuctionEnvironment(["1", "2"], {"1": ["1", "2"], "2": ["1", "2"]}, prior, behavioral or {})
