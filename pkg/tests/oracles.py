"""Slow, obviously-correct reference implementations used by the tests.

Pure Python loops over lists; nothing here touches the package's numpy
kernels.
"""

import math


def sq_dist(a, b):
    return sum((x - y) ** 2 for x, y in zip(a, b))


def brute_knn(points, q, k, candidates=None):
    """Indices of the k nearest rows to row q, ties to the lower index."""
    pool = range(len(points)) if candidates is None else candidates
    ranked = sorted((sq_dist(points[q], points[j]), j) for j in pool if j != q)
    return [j for _, j in ranked[:k]]


def brute_tomek_links(points, labels):
    """Literal pair definition: no third row l strictly closer to either member."""
    n = len(points)
    links = set()
    for i in range(n):
        for j in range(i + 1, n):
            if labels[i] == labels[j]:
                continue
            dij = sq_dist(points[i], points[j])
            blocked = False
            for l in range(n):
                if l in (i, j):
                    continue
                if sq_dist(points[i], points[l]) < dij or sq_dist(points[j], points[l]) < dij:
                    blocked = True
                    break
            if not blocked:
                links.add((i, j))
    return links


def brute_enn_removed(points, labels, k, majority_label):
    removed = []
    for i in range(len(points)):
        if labels[i] != majority_label:
            continue
        nbrs = brute_knn(points, i, k)
        minority_votes = sum(1 for j in nbrs if labels[j] != majority_label)
        if 2 * minority_votes > k:
            removed.append(i)
    return removed


def pair_count_auc(truth, scores):
    """Share of (positive, negative) pairs ranked correctly, ties count half."""
    pos = [s for t, s in zip(truth, scores) if t == 1]
    neg = [s for t, s in zip(truth, scores) if t == 0]
    wins = 0.0
    for p in pos:
        for n in neg:
            if p > n:
                wins += 1.0
            elif p == n:
                wins += 0.5
    return wins / (len(pos) * len(neg))


def logistic_loss(w, b, X, y, l2):
    """Mean NLL + l2 |w|^2 / (2n), scalar loops only."""
    n = len(X)
    total = 0.0
    for row, t in zip(X, y):
        z = sum(wi * xi for wi, xi in zip(w, row)) + b
        total += math.log1p(math.exp(-abs(z))) + max(z, 0.0) - t * z
    return total / n + l2 * sum(wi * wi for wi in w) / (2 * n)


def finite_difference_grad(w, b, X, y, l2, h=1e-6):
    grad = []
    for i in range(len(w)):
        up = list(w); up[i] += h
        dn = list(w); dn[i] -= h
        grad.append((logistic_loss(up, b, X, y, l2) - logistic_loss(dn, b, X, y, l2)) / (2 * h))
    grad_b = (logistic_loss(w, b + h, X, y, l2) - logistic_loss(w, b - h, X, y, l2)) / (2 * h)
    return grad, grad_b
