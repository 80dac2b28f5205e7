"""Pure-Python fallback for the compiled kernels.

Same contracts as _kernels.pyx, an order of magnitude slower. Selected by
`kernels` when the extension is unavailable or AMGCLUST_PURE_PYTHON is set.
"""

BACKEND = "python"


def gauss_seidel(indptr, indices, data, diag, x, b, row_start, row_stop, row_step):
    for i in range(row_start, row_stop, row_step):
        s, e = indptr[i], indptr[i + 1]
        rsum = data[s:e] @ x[indices[s:e]]
        x[i] += (b[i] - rsum) / diag[i]


def greedy_match(order, ei, ej, match):
    npairs = 0
    for e in order:
        i = ei[e]
        j = ej[e]
        if match[i] == -1 and match[j] == -1:
            match[i] = j
            match[j] = i
            npairs += 1
    return npairs
