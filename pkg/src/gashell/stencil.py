"""Central-difference partial derivatives of fields over coordinate space."""

from __future__ import annotations

import numpy as np

from .errors import StencilOutOfDomain

# one-sided offsets and weights of the central first-derivative stencils
_WEIGHTS = {
    2: ((1.0, 0.5),),
    4: ((1.0, 2.0 / 3.0), (2.0, -1.0 / 12.0)),
}


def partials(f, u, h: float, order: int = 2, chart=None) -> np.ndarray:
    """(d_1 f, d_2 f) at ``u`` by central differences on the coordinate cross.

    ``order`` 2 uses the five-point cross (u, u +- h e_i); order 4 extends to
    +-2h.  If ``chart`` is given the stencil must fit inside its domain.
    """
    if order not in _WEIGHTS:
        raise ValueError(f"unsupported stencil order {order}")
    u = np.asarray(u, dtype=float)
    reach = max(m for m, _ in _WEIGHTS[order]) * h
    if chart is not None and not chart.contains(u, margin=reach):
        raise StencilOutOfDomain(f"stencil of reach {reach:g} at {tuple(u)} leaves {chart.name} domain")
    out = []
    for i in range(2):
        e = np.zeros(2)
        e[i] = h
        acc = 0.0
        for m, w in _WEIGHTS[order]:
            acc = acc + w * (np.asarray(f(u + m * e)) - np.asarray(f(u - m * e)))
        out.append(acc / h)
    return np.stack(out)
