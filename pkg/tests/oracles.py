"""Independent brute-force oracles shared by the test modules."""

from itertools import combinations


def brute_force_mns(diagram):
    """Independent oracle: every pairwise-compatible family, keep the inclusion-maximal ones."""
    verts = sorted(diagram)
    subs = []
    for k in range(1, len(verts) + 1):
        for c in combinations(verts, k):
            b = frozenset(c)
            # connectivity by flood fill
            start = next(iter(b))
            seen, todo = {start}, [start]
            while todo:
                x = todo.pop()
                for y in diagram[x]:
                    if y in b and y not in seen:
                        seen.add(y)
                        todo.append(y)
            if seen == b:
                subs.append(b)

    def ok(b1, b2):
        if b1 <= b2 or b2 <= b1:
            return True
        return not (b1 & b2) and not any(diagram[x] & b2 for x in b1)

    families = []
    for mask in range(1 << len(subs)):
        fam = [subs[k] for k in range(len(subs)) if mask >> k & 1]
        if all(ok(a, b) for a, b in combinations(fam, 2)):
            families.append(frozenset(fam))
    fams = set(families)
    return {f for f in fams if not any(f < g for g in fams)}
