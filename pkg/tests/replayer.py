"""Brute-force reference replayer used as an oracle for the engine.

Shares no code with the package: at every decision time it rebuilds the
queue, the finished set and each machine's free cores from the start/finish
times recorded so far, then applies the scheduling rules directly.

Rules reproduced:
  * decision times are the distinct submit and finish times; at each one all
    completions and arrivals at that instant are visible, then one pass runs;
  * queued tasks are grouped by job, jobs ordered by (earliest submit in the
    job, job id), tasks within a job in arrival order (submit time, then
    trace order);
  * eligible = all parents finished; FIFO key (submit, id), SRTF key
    (runtime, submit, id), RANDOM = SplitMix64 Fisher-Yates;
  * machine candidates: enough total and free cores; FIRSTFIT first,
    BESTFIT least slack, WORSTFIT most free cores, ties to the lower index;
  * duration = runtime * reference_clock / machine_clock rounded half up.
"""
from fractions import Fraction
from math import floor

_MASK = (1 << 64) - 1


def _mix(z):
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


class _Stream:
    def __init__(self, seed, name):
        h = 0xCBF29CE484222325
        for b in name.encode():
            h = ((h ^ b) * 0x100000001B3) & _MASK
        self.s = _mix((seed & _MASK) ^ h)

    def draw(self, n):
        limit = (1 << 64) % n
        while True:
            self.s = (self.s + 0x9E3779B97F4A7C15) & _MASK
            r = _mix(self.s)
            if r >= limit:
                return r % n

    def permute(self, xs):
        xs = list(xs)
        for i in range(len(xs) - 1, 0, -1):
            j = self.draw(i + 1)
            xs[i], xs[j] = xs[j], xs[i]
        return xs


def replay(tasks, machines, sort, alloc, seed=0):
    """Return {task_id: (start_us, finish_us, machine_index)}.

    ``tasks`` is a sequence of (task_id, job_id, submit_us, runtime_us,
    cores, parents) in trace order; ``machines`` a sequence of (cores, mhz).
    """
    ref = max(mhz for _, mhz in machines)
    trace_pos = {t[0]: k for k, t in enumerate(tasks)}
    job_first = {}
    for tid, job, submit, *_ in tasks:
        job_first[job] = min(job_first.get(job, submit), submit)
    rng = _Stream(seed, f"{sort}-{alloc}")
    placed = {}
    now = None
    while len(placed) < len(tasks):
        future = [t[2] for t in tasks if now is None or t[2] > now]
        future += [f for _, f, _ in placed.values() if now is None or f > now]
        if not future:
            raise RuntimeError("stuck")
        now = min(future)
        finished = {tid for tid, (_, f, _) in placed.items() if f <= now}
        free = [cores for cores, _ in machines]
        for tid, (s, f, m) in placed.items():
            if s <= now < f:
                free[m] -= tasks[trace_pos[tid]][4]
        waiting = [t for t in tasks if t[2] <= now and t[0] not in placed]
        waiting.sort(key=lambda t: (t[2], trace_pos[t[0]]))
        jobs = sorted({t[1] for t in waiting}, key=lambda j: (job_first[j], j))
        queue = [t for j in jobs for t in waiting if t[1] == j]
        ready = [t for t in queue if set(t[5]) <= finished]
        if sort == "FIFO":
            ready.sort(key=lambda t: (t[2], t[0]))
        elif sort == "SRTF":
            ready.sort(key=lambda t: (t[3], t[2], t[0]))
        else:
            ready = rng.permute(ready)
        for tid, job, submit, runtime, cores, parents in ready:
            fits = [m for m in range(len(machines)) if machines[m][0] >= cores and free[m] >= cores]
            if not fits:
                continue
            if alloc == "FIRSTFIT":
                m = fits[0]
            elif alloc == "BESTFIT":
                m = min(fits, key=lambda k: (free[k] - cores, k))
            else:
                m = min(fits, key=lambda k: (-free[k], k))
            free[m] -= cores
            dur = floor(Fraction(runtime * ref, machines[m][1]) + Fraction(1, 2))
            placed[tid] = (now, now + dur, m)
    return placed
