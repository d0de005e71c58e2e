"""Brute-force reference implementations used only by the tests.

Each one is written directly from the defining formula, with plain loops,
and shares no code with the package.
"""

import math


def otsu_bruteforce(counts):
    """Smallest n in [1, 255] maximising A0*A1*(b0-b1)^2, evaluated literally."""
    total = float(sum(counts))
    p = [c / total for c in counts]
    best_n, best_val = None, -1.0
    for n in range(1, 256):
        a0 = sum(p[k] for k in range(0, n))
        a1 = sum(p[k] for k in range(n, 256))
        if a0 == 0 or a1 == 0:
            continue
        b0 = sum(k * p[k] for k in range(0, n)) / a0
        b1 = sum(k * p[k] for k in range(n, 256)) / a1
        val = a0 * a1 * (b0 - b1) ** 2
        if val > best_val:
            best_n, best_val = n, val
    return best_n


def bilinear_reference(row_values, in_w, out_w):
    """Half-pixel-centred linear interpolation of a single row."""
    out = []
    for x in range(out_w):
        s = (x + 0.5) * in_w / out_w - 0.5
        s = min(max(s, 0.0), in_w - 1)
        i0 = int(math.floor(s))
        i1 = min(i0 + 1, in_w - 1)
        f = s - i0
        v = row_values[i0] * (1 - f) + row_values[i1] * f
        out.append(min(255, max(0, int(math.floor(v + 0.5)))))
    return out


def swt2_bruteforce(x, lo, hi):
    """Direct double sum: plane[i][j] = sum_a sum_b fc[a] fr[b] x[(i+a)%R][(j+b)%C]."""
    R, C = len(x), len(x[0])
    planes = {}
    for name, fr, fc in (("A", lo, lo), ("H", lo, hi), ("V", hi, lo), ("D", hi, hi)):
        out = [[0.0] * C for _ in range(R)]
        for i in range(R):
            for j in range(C):
                s = 0.0
                for a in range(len(fc)):
                    for b in range(len(fr)):
                        s += fc[a] * fr[b] * x[(i + a) % R][(j + b) % C]
                out[i][j] = s
        planes[name] = out
    return planes


def jacobi_eigen(S, tol=1e-14, max_sweeps=100):
    """Cyclic Jacobi rotations on a symmetric matrix (list of lists).

    Returns (eigenvalues, eigenvectors-as-columns), sorted descending.
    """
    n = len(S)
    A = [row[:] for row in S]
    V = [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]
    for _ in range(max_sweeps):
        off = sum(A[i][j] ** 2 for i in range(n) for j in range(n) if i != j)
        scale = sum(A[i][i] ** 2 for i in range(n)) or 1.0
        if off <= tol * tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if A[p][q] == 0.0:
                    continue
                theta = (A[q][q] - A[p][p]) / (2.0 * A[p][q])
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp, akq = A[k][p], A[k][q]
                    A[k][p] = c * akp - s * akq
                    A[k][q] = s * akp + c * akq
                for k in range(n):
                    apk, aqk = A[p][k], A[q][k]
                    A[p][k] = c * apk - s * aqk
                    A[q][k] = s * apk + c * aqk
                for k in range(n):
                    vkp, vkq = V[k][p], V[k][q]
                    V[k][p] = c * vkp - s * vkq
                    V[k][q] = s * vkp + c * vkq
    evals = [A[i][i] for i in range(n)]
    order = sorted(range(n), key=lambda i: -evals[i])
    return [evals[i] for i in order], [[V[r][i] for i in order] for r in range(n)]


def covariance(X):
    rows, cols = len(X), len(X[0])
    means = [sum(X[r][c] for r in range(rows)) / rows for c in range(cols)]
    return [
        [sum((X[r][a] - means[a]) * (X[r][b] - means[b]) for r in range(rows)) / (rows - 1) for b in range(cols)]
        for a in range(cols)
    ]


def nearest_label(store, labels, query):
    best_i, best_d = None, None
    for i, row in enumerate(store):
        d = math.sqrt(sum((a - b) ** 2 for a, b in zip(row, query)))
        if best_d is None or d < best_d:
            best_i, best_d = i, d
    return labels[best_i]


def tally(preds, truths, positive=0):
    tp = fn = fp = tn = 0
    for p, t in zip(preds, truths):
        if t == positive:
            if p == positive:
                tp += 1
            else:
                fn += 1
        else:
            if p == positive:
                fp += 1
            else:
                tn += 1
    return tp, fn, fp, tn
