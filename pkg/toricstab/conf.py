"""Access to the TORIC_STAB settings block and the shared worker pool."""
from django.conf import settings
from joblib import Parallel, delayed


def get_setting(name):
    """Return one entry of ``settings.TORIC_STAB``."""
    return settings.TORIC_STAB[name]


def parallel_map(fn, items):
    """
    Apply ``fn`` to every item on up to THREADS joblib worker processes.

    Results come back in input order, so callers see the same output for any
    worker count. ``fn`` may be a closure; the loky backend pickles it with
    cloudpickle.
    """
    items = list(items)
    workers = get_setting('THREADS')
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    return Parallel(n_jobs=min(workers, len(items)))(delayed(fn)(item) for item in items)
