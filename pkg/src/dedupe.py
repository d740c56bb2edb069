import hashlib
from typing import Callable, Dict, Hashable, Iterable, List, Tuple, TypeVar

T = TypeVar("T")


def points_digest(points_1based: Iterable[int]) -> str:
    """Checksum of a point set: sha256 of the sorted 1-based labels joined by commas."""
    text = ",".join(str(p) for p in sorted(points_1based))
    return hashlib.sha256(text.encode("ascii")).hexdigest()


def unique_by(items: Iterable[T], key: Callable[[T], str]) -> List[T]:
    """Keep the first item per key; the result is ordered by key."""
    seen: Dict[str, T] = {}
    for it in items:
        k = key(it)
        if k not in seen:
            seen[k] = it
    return [seen[k] for k in sorted(seen)]


def group_by(items: Iterable[T], key: Callable[[T], str]) -> Dict[str, List[T]]:
    out: Dict[str, List[T]] = {}
    for it in items:
        out.setdefault(key(it), []).append(it)
    return out


def pairs_with_equal_keys(items: Iterable[Tuple[str, str]]) -> List[Tuple[str, str]]:
    """From (name, key) pairs, every unordered pair of names sharing a key."""
    out = []
    for names in group_by(items, key=lambda t: t[1]).values():
        labels = sorted(n for n, _ in names)
        for i, a in enumerate(labels):
            for b in labels[i + 1:]:
                out.append((a, b))
    return out


def count_classes(nodes: Iterable[Hashable], links: Iterable[Tuple[Hashable, Hashable]]) -> int:
    """Number of classes of the equivalence on nodes generated by links (union-find)."""
    parent: Dict[Hashable, Hashable] = {n: n for n in nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    classes = len(parent)
    for a, b in links:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            classes -= 1
    return classes
