from __future__ import annotations

import functools
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from cellular_dga import catalog  # noqa: E402
from cellular_dga.dgabuild import build_dga  # noqa: E402


@functools.lru_cache(maxsize=None)
def catalog_dga(name: str):
    return build_dga(catalog.get(name))


def collapse_parallel(d0):
    """Subdivide, run both cancellation orders and rename back to the unsplit ids.

    Returns (collapsed diff, reference diff built on the unsplit square).
    """
    import re

    from cellular_dga.cellcomplex import to_parallel
    from cellular_dga.freealg import Polynomial, substitute
    from cellular_dga.transform import cancel_pipeline, parallel_cancellations

    (sid,) = d0.squares
    d = to_parallel(d0)
    dga = build_dga(d)
    c1, c2 = parallel_cancellations(dga, d, sid)
    out = cancel_pipeline(cancel_pipeline(dga, c1), c2)

    def ren(gid):
        return re.sub(r"\+;", ";", gid)

    h = {g: Polynomial.gen(ren(g)) for g in out.generators}
    got = {ren(g): substitute(h, p) for g, p in out.diff.items()}
    return got, build_dga(d0).diff
