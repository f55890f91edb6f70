# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the hot loops in _kernels_py."""


def concat_mul(dict ta, dict tb, Py_ssize_t maxlen, cut):
    cdef dict acc = {}
    cdef dict by_start = {}
    cdef tuple k1, k2, w1, w2, key
    cdef Py_ssize_t n1
    cdef list rights
    for k2, c2 in tb.items():
        rights = by_start.get(k2[0])
        if rights is None:
            by_start[k2[0]] = [(k2, c2)]
        else:
            rights.append((k2, c2))
    for k1, c1 in ta.items():
        rights = by_start.get(k1[1])
        if rights is None:
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


def leibniz(dict terms, list dgen, list deg, Py_ssize_t maxlen, cut):
    cdef dict acc = {}
    cdef tuple key, w, head, tail, u, nk, k2
    cdef Py_ssize_t n, p
    cdef long sign
    cdef dict dx
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
            sign += <long>deg[letter]
    return acc


def find_redex(tuple word, dict rules, tuple lens):
    cdef Py_ssize_t n = len(word)
    cdef Py_ssize_t i, L
    cdef tuple sub
    for i in range(n):
        for L in lens:
            if i + L > n:
                break
            sub = word[i:i + L]
            if sub in rules:
                return i, sub
    return None
