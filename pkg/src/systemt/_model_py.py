"""Closure compiler for the set-theoretical model (pure-Python kernel).

``_model.pyx`` includes this file verbatim and compiles it, so the two
kernels are the same code.  Stick to plain Python here.

A term compiles to a runner ``env -> SemVal`` where ``env`` is a tuple and
``env[0]`` is ``Var(0)``.  Application is inlined in the ``App`` runners,
with variants for a variable in function or argument position.  That is
where the time goes.
"""

from systemt.semval import (
    S_FALSE,
    S_TRUE,
    DenotationError,
    NotAFunctionError,
    SFun,
    SNat,
    as_bit,
)
from systemt.syntax import NAT, App, FalseT, If, Lam, Rec, Succ, TrueT, Var, Zero, as_numeral


def apply(f, a):
    """Same as ``semval.apply_sem``; a local copy so compiled code calls compiled code."""
    if type(f) is not SFun:
        raise NotAFunctionError(f"cannot apply non-function {f!r}")
    cache = f.cache
    if cache is None or type(a) is not SNat:
        return f.fn(a)
    key = a.n
    try:
        return cache[key]
    except KeyError:
        pass
    result = f.fn(a)
    cache[key] = result
    return result


def rec_value(z, s, n):
    """``rec z s n``, resuming the cached accumulator chain of ``(s, z)``."""
    if n == 0:
        return z
    if type(s) is not SFun:
        raise NotAFunctionError(f"rec step is not a function: {s!r}")
    chains = s.rec_chains
    if chains is None:
        chains = s.rec_chains = {}
    # SNat/SBool keys by payload; functions by identity
    tz = type(z)
    key = z.n if tz is SNat else (z.b,) if tz is not SFun else z
    chain = chains.get(key)
    if chain is None:
        chain = chains[key] = [z]
    while len(chain) <= n:
        k = len(chain) - 1
        value = apply(apply(s, SNat(k)), chain[k])
        # a nested call may already have extended the chain
        if len(chain) == k + 1:
            chain.append(value)
    return chain[n]


def _constant(value):
    return lambda env: value


def _hoisted(run):
    cell = []

    def once(env):
        if cell:
            return cell[0]
        value = run(())
        cell.append(value)
        return value

    return once


def compile_term(term):
    """Compile ``term`` to a runner taking the environment tuple."""
    return _compile(term)[0]


def _finish(run, bound, var=-1):
    # closed subterms are evaluated once and shared
    if bound == 0 and var < 0:
        return _hoisted(run), 0, -1
    return run, bound, var


def _compile(term):
    """Return ``(runner, free-variable bound, var index or -1)``."""
    if isinstance(term, Var):
        i = term.index
        return (lambda env: env[i]), i + 1, i
    if isinstance(term, Zero):
        return _constant(SNat(0)), 0, -1
    if isinstance(term, TrueT):
        return _constant(S_TRUE), 0, -1
    if isinstance(term, FalseT):
        return _constant(S_FALSE), 0, -1
    if isinstance(term, Succ):
        literal = as_numeral(term)
        if literal is not None:
            return _constant(SNat(literal)), 0, -1
        count = 0
        while isinstance(term, Succ):
            term = term.arg
            count += 1
        inner, bound, _ = _compile(term)

        def succ(env):
            v = inner(env)
            if type(v) is not SNat:
                raise DenotationError(f"succ of non-natural {v!r}")
            return SNat(v.n + count)

        return _finish(succ, bound)
    if isinstance(term, Lam):
        body, body_bound, _ = _compile(term.body)
        # cache per index only where results get reused: curried steps such
        # as `fun k . fun r . ...` would just pile up partial applications
        memo = term.annotation == NAT and not isinstance(term.body, Lam)

        def lam(env):
            return SFun(lambda arg: body((arg,) + env), memo)

        return _finish(lam, max(body_bound - 1, 0))
    if isinstance(term, App):
        return _compile_app(term)
    if isinstance(term, If):
        cond, c_bound, _ = _compile(term.cond)
        then_b, t_bound, _ = _compile(term.then_branch)
        else_b, e_bound, _ = _compile(term.else_branch)

        def if_(env):
            c = cond(env)
            if c is S_TRUE:
                return then_b(env)
            if c is S_FALSE:
                return else_b(env)
            return then_b(env) if as_bit(c) else else_b(env)

        return _finish(if_, max(c_bound, t_bound, e_bound))
    if isinstance(term, Rec):
        zc, z_bound, _ = _compile(term.zero_case)
        sc, s_bound, _ = _compile(term.step_case)
        nc, n_bound, _ = _compile(term.scrutinee)

        def rec(env):
            z = zc(env)
            s = sc(env)
            n = nc(env)
            if type(n) is not SNat:
                raise DenotationError(f"rec scrutinee is not a natural: {n!r}")
            return rec_value(z, s, n.n)

        return _finish(rec, max(z_bound, s_bound, n_bound))
    raise TypeError(f"not a term: {term!r}")


def _compile_app(term):
    fn, fn_bound, fn_var = _compile(term.fn)
    arg, arg_bound, arg_var = _compile(term.arg)
    bound = max(fn_bound, arg_bound)

    if fn_var >= 0:

        def app(env):
            f = env[fn_var]
            a = arg(env)
            if type(f) is not SFun:
                raise NotAFunctionError(f"cannot apply non-function {f!r}")
            cache = f.cache
            if cache is None or type(a) is not SNat:
                return f.fn(a)
            key = a.n
            try:
                return cache[key]
            except KeyError:
                pass
            result = f.fn(a)
            cache[key] = result
            return result

    elif arg_var >= 0:

        def app(env):
            f = fn(env)
            a = env[arg_var]
            if type(f) is not SFun:
                raise NotAFunctionError(f"cannot apply non-function {f!r}")
            cache = f.cache
            if cache is None or type(a) is not SNat:
                return f.fn(a)
            key = a.n
            try:
                return cache[key]
            except KeyError:
                pass
            result = f.fn(a)
            cache[key] = result
            return result

    else:

        def app(env):
            f = fn(env)
            a = arg(env)
            if type(f) is not SFun:
                raise NotAFunctionError(f"cannot apply non-function {f!r}")
            cache = f.cache
            if cache is None or type(a) is not SNat:
                return f.fn(a)
            key = a.n
            try:
                return cache[key]
            except KeyError:
                pass
            result = f.fn(a)
            cache[key] = result
            return result

    return _finish(app, bound)
