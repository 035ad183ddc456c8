"""Pure-Python call-by-value environment machine (fallback kernel).

Operates on the tuple encoding produced by ``machine.encode``.  Runtime
values are ``int`` (nat), ``bool`` (bool) and ``(lam_code, env)`` closures;
environments are linked ``(value, rest)`` pairs ending in ``None``.

Must stay behaviourally identical to ``_machine.pyx``.
"""

VAR, LAM, APP, NUM, SUCC, REC, TRUE, FALSE, IF = range(9)

# continuation frames
K_ARG, K_CALL, K_APPLY_TO, K_SUCC, K_IF, K_REC_STEP, K_REC_SCRUT, K_REC_START, K_REC_LOOP = range(9)


class BudgetExceeded(Exception):
    pass


def run(code, budget=-1):
    """Evaluate closed ``code`` to a runtime value; ``budget < 0`` is unlimited."""
    stack = []
    env = None
    steps = 0
    while True:
        # evaluate `code` in `env`, leaving the result in `value`
        steps += 1
        if budget >= 0 and steps > budget:
            raise BudgetExceeded(steps - 1)
        tag = code[0]
        if tag == VAR:
            e = env
            for _ in range(code[1]):
                e = e[1]
            value = e[0]
        elif tag == LAM:
            value = (code, env)
        elif tag == APP:
            stack.append((K_ARG, code[2], env))
            code = code[1]
            continue
        elif tag == NUM:
            value = code[1]
        elif tag == SUCC:
            stack.append((K_SUCC, code[2]))
            code = code[1]
            continue
        elif tag == TRUE:
            value = True
        elif tag == FALSE:
            value = False
        elif tag == IF:
            stack.append((K_IF, code, env))
            code = code[1]
            continue
        elif tag == REC:
            stack.append((K_REC_STEP, code, env))
            code = code[1]
            continue
        else:
            raise RuntimeError(f"bad opcode {tag}")

        # return `value` to the continuation stack
        while True:
            if not stack:
                return value
            frame = stack.pop()
            kind = frame[0]
            if kind == K_ARG:
                stack.append((K_CALL, value))
                code = frame[1]
                env = frame[2]
                break
            if kind == K_CALL:
                fn = frame[1]
                env = (value, fn[1])
                code = fn[0][1]
                break
            if kind == K_APPLY_TO:
                env = (frame[1], value[1])
                code = value[0][1]
                break
            if kind == K_SUCC:
                value = value + frame[1]
                continue
            if kind == K_IF:
                code = frame[1][2] if value else frame[1][3]
                env = frame[2]
                break
            if kind == K_REC_STEP:
                stack.append((K_REC_SCRUT, frame[1], frame[2], value))
                code = frame[1][2]
                env = frame[2]
                break
            if kind == K_REC_SCRUT:
                stack.append((K_REC_START, frame[3], value))
                code = frame[1][3]
                env = frame[2]
                break
            if kind == K_REC_START:
                # value is the scrutinee; frame holds (zero value, step closure)
                stack.append((K_REC_LOOP, frame[2], 0, value))
                value = frame[1]
                continue
            if kind == K_REC_LOOP:
                step_fn, k, n = frame[1], frame[2], frame[3]
                if k == n:
                    continue
                stack.append((K_REC_LOOP, step_fn, k + 1, n))
                stack.append((K_APPLY_TO, value))
                env = (k, step_fn[1])
                code = step_fn[0][1]
                break
            raise RuntimeError(f"bad frame {kind}")
