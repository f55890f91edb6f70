"""Pure-Python versions of the hot loops.  _kernels.pyx mirrors these."""


def concat_mul(ta, tb, maxlen, cut):
    """Product of two typed word series.

    Keys are (start, end, word); coefficients support .mul(other, cut).
    Words longer than maxlen are dropped.
    """
    acc = {}
    by_start = {}
    for k2, c2 in tb.items():
        by_start.setdefault(k2[0], []).append((k2, c2))
    for k1, c1 in ta.items():
        rights = by_start.get(k1[1])
        if not rights:
            continue
        w1 = k1[2]
        n1 = len(w1)
        for k2, c2 in rights:
            w2 = k2[2]
            if n1 + len(w2) > maxlen:
                continue
            c = c1.mul(c2, cut)
            if not c:
                continue
            key = (k1[0], k2[1], w1 + w2)
            cur = acc.get(key)
            if cur is None:
                acc[key] = c
            else:
                c = cur + c
                if c:
                    acc[key] = c
                else:
                    del acc[key]
    return acc


def leibniz(terms, dgen, deg, maxlen, cut):
    """Apply a derivation given on letters: d(w) = sum_p (-1)^{sum_{j<p} deg} ... d(w_p) ...."""
    acc = {}
    for key, c in terms.items():
        s, e, w = key
        n = len(w)
        sign = 0
        for p in range(n):
            letter = w[p]
            dx = dgen[letter]
            if dx:
                head = w[:p]
                tail = w[p + 1:]
                for k2, c2 in dx.items():
                    u = k2[2]
                    if n - 1 + len(u) > maxlen:
                        continue
                    cc = c.mul(c2, cut)
                    if not cc:
                        continue
                    if sign & 1:
                        cc = -cc
                    nk = (s, e, head + u + tail)
                    cur = acc.get(nk)
                    if cur is None:
                        acc[nk] = cc
                    else:
                        cc = cur + cc
                        if cc:
                            acc[nk] = cc
                        else:
                            del acc[nk]
            sign += deg[letter]
    return acc


def find_redex(word, rules, lens):
    """Leftmost occurrence of a rule left side in word; ties go to the shortest side."""
    n = len(word)
    for i in range(n):
        for L in lens:
            if i + L > n:
                break
            sub = word[i:i + L]
            if sub in rules:
                return i, sub
    return None
