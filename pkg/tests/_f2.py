"""Tiny F2 linear algebra used by test oracles (independent of the package)."""


def f2_rank(rows):
    """Rank over F2 of a list of bitmask rows."""
    basis = []
    for row in rows:
        for b in basis:
            row = min(row, row ^ b)
        if row:
            basis.append(row)
            basis.sort(reverse=True)
    return len(basis)


def f2_reduce(row, basis):
    for b in basis:
        row = min(row, row ^ b)
    return row


def f2_span_basis(rows):
    basis = []
    for row in rows:
        row = f2_reduce(row, basis)
        if row:
            basis.append(row)
            basis.sort(reverse=True)
    return basis


def f2_kernel_dim(rows, ncols):
    return ncols - f2_rank_cols(rows, ncols)


def f2_rank_cols(rows, ncols):
    # rank of the matrix whose rows are bitmasks over ncols columns
    return f2_rank(list(rows))
