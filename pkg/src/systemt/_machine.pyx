# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled call-by-value environment machine.

Same algorithm and encoding as ``_machine_py``; only the loop variables are
typed.  Keep the two files in lockstep.
"""

cdef enum:
    OP_VAR, OP_LAM, OP_APP, OP_NUM, OP_SUCC, OP_REC, OP_TRUE, OP_FALSE, OP_IF

cdef enum:
    K_ARG, K_CALL, K_APPLY_TO, K_SUCC, K_IF, K_REC_STEP, K_REC_SCRUT, K_REC_START, K_REC_LOOP


class BudgetExceeded(Exception):
    pass


def run(tuple code, long long budget=-1):
    cdef list stack = []
    cdef object env = None
    cdef object value = None
    cdef object e
    cdef tuple frame
    cdef tuple fn
    cdef long long steps = 0
    cdef long tag, kind, i, idx
    while True:
        steps += 1
        if budget >= 0 and steps > budget:
            raise BudgetExceeded(steps - 1)
        tag = code[0]
        if tag == OP_VAR:
            e = env
            idx = code[1]
            for i in range(idx):
                e = (<tuple>e)[1]
            value = (<tuple>e)[0]
        elif tag == OP_LAM:
            value = (code, env)
        elif tag == OP_APP:
            stack.append((K_ARG, code[2], env))
            code = <tuple>code[1]
            continue
        elif tag == OP_NUM:
            value = code[1]
        elif tag == OP_SUCC:
            stack.append((K_SUCC, code[2]))
            code = <tuple>code[1]
            continue
        elif tag == OP_TRUE:
            value = True
        elif tag == OP_FALSE:
            value = False
        elif tag == OP_IF:
            stack.append((K_IF, code, env))
            code = <tuple>code[1]
            continue
        elif tag == OP_REC:
            stack.append((K_REC_STEP, code, env))
            code = <tuple>code[1]
            continue
        else:
            raise RuntimeError(f"bad opcode {tag}")

        while True:
            if not stack:
                return value
            frame = <tuple>stack.pop()
            kind = frame[0]
            if kind == K_ARG:
                stack.append((K_CALL, value))
                code = <tuple>frame[1]
                env = frame[2]
                break
            if kind == K_CALL:
                fn = <tuple>frame[1]
                env = (value, fn[1])
                code = <tuple>(<tuple>fn[0])[1]
                break
            if kind == K_APPLY_TO:
                fn = <tuple>value
                env = (frame[1], fn[1])
                code = <tuple>(<tuple>fn[0])[1]
                break
            if kind == K_SUCC:
                value = value + frame[1]
                continue
            if kind == K_IF:
                code = <tuple>((<tuple>frame[1])[2] if value else (<tuple>frame[1])[3])
                env = frame[2]
                break
            if kind == K_REC_STEP:
                stack.append((K_REC_SCRUT, frame[1], frame[2], value))
                code = <tuple>(<tuple>frame[1])[2]
                env = frame[2]
                break
            if kind == K_REC_SCRUT:
                stack.append((K_REC_START, frame[3], value))
                code = <tuple>(<tuple>frame[1])[3]
                env = frame[2]
                break
            if kind == K_REC_START:
                stack.append((K_REC_LOOP, frame[2], 0, value))
                value = frame[1]
                continue
            if kind == K_REC_LOOP:
                fn = <tuple>frame[1]
                if frame[2] == frame[3]:
                    continue
                stack.append((K_REC_LOOP, fn, frame[2] + 1, frame[3]))
                stack.append((K_APPLY_TO, value))
                env = (frame[2], fn[1])
                code = <tuple>(<tuple>fn[0])[1]
                break
            raise RuntimeError(f"bad frame {kind}")
