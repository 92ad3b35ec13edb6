"""Pure-Python versions of the compiled kernels (arbitrary-precision ints)."""


def maxplus_eval(E, C, V, D, q):
    out = []
    for v, d in zip(V, D):
        out.append(max(c * d + q * sum(e * x for e, x in zip(row, v)) for row, c in zip(E, C)))
    return out


def locate_cells(W, w, offsets, V, D):
    rows = list(zip(W, w))
    cells = [rows[offsets[i]:offsets[i + 1]] for i in range(len(offsets) - 1)]
    out = []
    for v, d in zip(V, D):
        hit = -1
        for idx, cell in enumerate(cells):
            if all(b * d + sum(a * x for a, x in zip(row, v)) >= 0 for row, b in cell):
                hit = idx
                break
        out.append(hit)
    return out
