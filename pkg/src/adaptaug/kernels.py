"""Hot numeric kernels for the sequence model.

Every function here is written once in numba-compatible numpy and compiled
with ``@njit`` when the numba backend is active. Backend selection happens
at import time via the ``ADAPTAUG_BACKEND`` environment variable:

    ADAPTAUG_BACKEND=numba   force JIT kernels (default when numba imports)
    ADAPTAUG_BACKEND=numpy   force the pure-numpy/Python fallback

The fallback executes the exact same source, so the two backends agree to
floating-point reordering noise (~1e-12 relative); see
``benchmarks/bench_kernels.py`` for the speed comparison.

All arrays are float64, token ids int64. Sequences are processed one at a
time (no padding); shapes are (T, d) for activations, (H, T, T) for
attention weights.
"""

import math
import os

import numpy as np

BACKEND = os.environ.get("ADAPTAUG_BACKEND", "").strip().lower()
if not BACKEND:
    try:
        import numba  # noqa: F401

        BACKEND = "numba"
    except ImportError:  # pragma: no cover - numba is a hard dependency
        BACKEND = "numpy"

if BACKEND == "numba":
    from numba import njit

    _jit = njit(cache=True)
elif BACKEND == "numpy":
    def _jit(fn):
        return fn
else:
    raise RuntimeError(
        f"ADAPTAUG_BACKEND must be 'numba' or 'numpy', got {BACKEND!r}"
    )

LN_EPS = 1e-5
_GELU_C = 0.7978845608028654  # sqrt(2/pi)
_GELU_A = 0.044715


@_jit
def gather_embed(tok_emb, pos_emb, tokens):
    """Token + learned positional embedding lookup: x[t] = E[tokens[t]] + P[t]."""
    T = tokens.shape[0]
    d = tok_emb.shape[1]
    x = np.empty((T, d))
    for t in range(T):
        x[t] = tok_emb[tokens[t]] + pos_emb[t]
    return x


@_jit
def layer_norm_fwd(x, g, b):
    """Row-wise layer norm. Returns (y, mean, rstd) with mean/rstd cached for backward."""
    T, d = x.shape
    y = np.empty((T, d))
    mean = np.empty(T)
    rstd = np.empty(T)
    for i in range(T):
        m = 0.0
        for j in range(d):
            m += x[i, j]
        m /= d
        v = 0.0
        for j in range(d):
            diff = x[i, j] - m
            v += diff * diff
        v /= d
        r = 1.0 / math.sqrt(v + LN_EPS)
        mean[i] = m
        rstd[i] = r
        for j in range(d):
            y[i, j] = (x[i, j] - m) * r * g[j] + b[j]
    return y, mean, rstd


@_jit
def layer_norm_bwd(dy, x, g, mean, rstd):
    """Backward of layer_norm_fwd. Returns (dx, dg, db)."""
    T, d = x.shape
    dx = np.empty((T, d))
    dg = np.zeros(d)
    db = np.zeros(d)
    for i in range(T):
        r = rstd[i]
        m = mean[i]
        s1 = 0.0
        s2 = 0.0
        for j in range(d):
            xhat = (x[i, j] - m) * r
            dxh = dy[i, j] * g[j]
            s1 += dxh
            s2 += dxh * xhat
            dg[j] += dy[i, j] * xhat
            db[j] += dy[i, j]
        s1 /= d
        s2 /= d
        for j in range(d):
            xhat = (x[i, j] - m) * r
            dxh = dy[i, j] * g[j]
            dx[i, j] = r * (dxh - s1 - xhat * s2)
    return dx, dg, db


@_jit
def gelu_fwd(x):
    """Smooth GELU (tanh approximation); smoothness keeps finite-difference checks clean."""
    u = _GELU_C * (x + _GELU_A * x * x * x)
    return 0.5 * x * (1.0 + np.tanh(u))


@_jit
def gelu_bwd(dy, x):
    u = _GELU_C * (x + _GELU_A * x * x * x)
    t = np.tanh(u)
    du = _GELU_C * (1.0 + 3.0 * _GELU_A * x * x)
    return dy * (0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * du)


@_jit
def linear_fwd(x, w, b):
    return np.dot(x, w) + b


@_jit
def linear_bwd(dy, x, w):
    """Returns (dx, dw, db) for y = x @ w + b."""
    dx = np.dot(dy, np.ascontiguousarray(w.T))
    dw = np.dot(np.ascontiguousarray(x.T), dy)
    db = np.sum(dy, axis=0)
    return dx, dw, db


@_jit
def attention_fwd(xn, wq, bq, wk, bk, wv, bv, wo, bo, n_heads):
    """Causal multi-head self-attention over a full sequence.

    Returns (out, q, k, v, att, ctx); everything after ``out`` is cached
    activations for the backward pass. att[h, i, j] is the weight with which
    position i attends to j (zero for j > i).
    """
    T, d = xn.shape
    dh = d // n_heads
    scale = 1.0 / math.sqrt(dh)
    q = np.dot(xn, wq) + bq
    k = np.dot(xn, wk) + bk
    v = np.dot(xn, wv) + bv
    att = np.zeros((n_heads, T, T))
    ctx = np.empty((T, d))
    for h in range(n_heads):
        lo = h * dh
        hi = lo + dh
        qh = np.ascontiguousarray(q[:, lo:hi])
        kh = np.ascontiguousarray(k[:, lo:hi])
        vh = np.ascontiguousarray(v[:, lo:hi])
        scores = np.dot(qh, np.ascontiguousarray(kh.T)) * scale
        for i in range(T):
            m = scores[i, 0]
            for j in range(1, i + 1):
                if scores[i, j] > m:
                    m = scores[i, j]
            s = 0.0
            for j in range(i + 1):
                e = math.exp(scores[i, j] - m)
                att[h, i, j] = e
                s += e
            inv = 1.0 / s
            for j in range(i + 1):
                att[h, i, j] *= inv
        ctx[:, lo:hi] = np.dot(att[h], vh)
    out = np.dot(ctx, wo) + bo
    return out, q, k, v, att, ctx


@_jit
def attention_bwd(dout, xn, q, k, v, att, ctx, wq, wk, wv, wo, n_heads):
    """Backward of attention_fwd.

    Returns (dxn, dwq, dbq, dwk, dbk, dwv, dbv, dwo, dbo).
    """
    T, d = xn.shape
    dh = d // n_heads
    scale = 1.0 / math.sqrt(dh)
    dctx = np.dot(dout, np.ascontiguousarray(wo.T))
    dwo = np.dot(np.ascontiguousarray(ctx.T), dout)
    dbo = np.sum(dout, axis=0)
    dq = np.empty((T, d))
    dk = np.empty((T, d))
    dv = np.empty((T, d))
    for h in range(n_heads):
        lo = h * dh
        hi = lo + dh
        qh = np.ascontiguousarray(q[:, lo:hi])
        kh = np.ascontiguousarray(k[:, lo:hi])
        vh = np.ascontiguousarray(v[:, lo:hi])
        atth = att[h]
        dctxh = np.ascontiguousarray(dctx[:, lo:hi])
        datt = np.dot(dctxh, np.ascontiguousarray(vh.T))
        dvh = np.dot(np.ascontiguousarray(atth.T), dctxh)
        dscores = np.zeros((T, T))
        for i in range(T):
            acc = 0.0
            for j in range(i + 1):
                acc += datt[i, j] * atth[i, j]
            for j in range(i + 1):
                dscores[i, j] = atth[i, j] * (datt[i, j] - acc) * scale
        dq[:, lo:hi] = np.dot(dscores, kh)
        dk[:, lo:hi] = np.dot(np.ascontiguousarray(dscores.T), qh)
        dv[:, lo:hi] = dvh
    dwq = np.dot(np.ascontiguousarray(xn.T), dq)
    dbq = np.sum(dq, axis=0)
    dwk = np.dot(np.ascontiguousarray(xn.T), dk)
    dbk = np.sum(dk, axis=0)
    dwv = np.dot(np.ascontiguousarray(xn.T), dv)
    dbv = np.sum(dv, axis=0)
    dxn = (
        np.dot(dq, np.ascontiguousarray(wq.T))
        + np.dot(dk, np.ascontiguousarray(wk.T))
        + np.dot(dv, np.ascontiguousarray(wv.T))
    )
    return dxn, dwq, dbq, dwk, dbk, dwv, dbv, dwo, dbo


@_jit
def mlp_fwd(xn, w1, b1, w2, b2):
    """Two-layer GELU MLP. Returns (out, pre, act) with caches for backward."""
    pre = np.dot(xn, w1) + b1
    act = gelu_fwd(pre)
    out = np.dot(act, w2) + b2
    return out, pre, act


@_jit
def mlp_bwd(dout, xn, pre, act, w1, w2):
    """Backward of mlp_fwd. Returns (dxn, dw1, db1, dw2, db2)."""
    dact = np.dot(dout, np.ascontiguousarray(w2.T))
    dw2 = np.dot(np.ascontiguousarray(act.T), dout)
    db2 = np.sum(dout, axis=0)
    dpre = gelu_bwd(dact, pre)
    dw1 = np.dot(np.ascontiguousarray(xn.T), dpre)
    db1 = np.sum(dpre, axis=0)
    dxn = np.dot(dpre, np.ascontiguousarray(w1.T))
    return dxn, dw1, db1, dw2, db2


@_jit
def head_logits(h, e_t):
    """Weight-tied output head: logits = h @ E.T (caller supplies contiguous E.T)."""
    return np.dot(h, e_t)


@_jit
def softmax_xent_rows(rows, labels):
    """Summed cross-entropy over logit rows with integer labels.

    Returns (loss, drows) where drows is the gradient of the summed loss
    (softmax(row) minus one-hot), computed with the standard stable
    log-sum-exp shift.
    """
    R, V = rows.shape
    drows = np.empty((R, V))
    loss = 0.0
    for i in range(R):
        m = rows[i, 0]
        for j in range(1, V):
            if rows[i, j] > m:
                m = rows[i, j]
        s = 0.0
        for j in range(V):
            e = math.exp(rows[i, j] - m)
            drows[i, j] = e
            s += e
        inv = 1.0 / s
        for j in range(V):
            drows[i, j] *= inv
        loss += m + math.log(s) - rows[i, labels[i]]
        drows[i, labels[i]] -= 1.0
    return loss, drows


@_jit
def softmax_vec(logits):
    """Stable softmax of a single logit vector."""
    V = logits.shape[0]
    m = logits[0]
    for j in range(1, V):
        if logits[j] > m:
            m = logits[j]
    p = np.empty(V)
    s = 0.0
    for j in range(V):
        e = math.exp(logits[j] - m)
        p[j] = e
        s += e
    return p / s


# --- incremental (one-pass) decoding kernels ---


@_jit
def layer_norm_row(x, g, b):
    d = x.shape[0]
    m = 0.0
    for j in range(d):
        m += x[j]
    m /= d
    v = 0.0
    for j in range(d):
        diff = x[j] - m
        v += diff * diff
    v /= d
    r = 1.0 / math.sqrt(v + LN_EPS)
    y = np.empty(d)
    for j in range(d):
        y[j] = (x[j] - m) * r * g[j] + b[j]
    return y


@_jit
def attn_step(xn, kcache, vcache, t, wq, bq, wk, bk, wv, bv, wo, bo, n_heads):
    """One decoding step of causal attention at position t.

    Writes this position's key/value rows into the caches and attends over
    positions 0..t. The query prefix is never recomputed: this is what makes
    generate-then-embed a single pass.
    """
    d = xn.shape[0]
    dh = d // n_heads
    scale = 1.0 / math.sqrt(dh)
    qrow = np.dot(xn, wq) + bq
    kcache[t] = np.dot(xn, wk) + bk
    vcache[t] = np.dot(xn, wv) + bv
    ctx = np.empty(d)
    for h in range(n_heads):
        lo = h * dh
        hi = lo + dh
        kh = np.ascontiguousarray(kcache[: t + 1, lo:hi])
        vh = np.ascontiguousarray(vcache[: t + 1, lo:hi])
        qh = np.ascontiguousarray(qrow[lo:hi])
        scores = np.dot(kh, qh) * scale
        m = scores[0]
        for j in range(1, t + 1):
            if scores[j] > m:
                m = scores[j]
        s = 0.0
        for j in range(t + 1):
            e = math.exp(scores[j] - m)
            scores[j] = e
            s += e
        ctx[lo:hi] = np.dot(scores, vh) / s
    return np.dot(ctx, wo) + bo


@_jit
def mlp_row(xn, w1, b1, w2, b2):
    pre = np.dot(xn, w1) + b1
    act = gelu_fwd(pre)
    return np.dot(act, w2) + b2


@_jit
def logits_row(h, e_t):
    return np.dot(h, e_t)
