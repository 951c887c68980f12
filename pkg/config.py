import os
from dotenv import load_dotenv

load_dotenv()


def _int_env(name, default):
    value = os.getenv(name)
    if value is None or not value.strip():
        return default
    try:
        return int(value)
    except ValueError:
        return value.strip()


class Config:
    # Precision defaults (s-order and t-order)
    DEFAULT_PREC = _int_env('GM_DEFAULT_PREC', 10)

    # Fixed x-degree bound; None means max(10, 3 * deg f)
    PREC_X = _int_env('GM_PREC_X', None)

    # Ceiling for automatic degree-bound increases
    MAX_PREC_X = _int_env('GM_MAX_PREC_X', 100)

    # Truncation stability check recomputes at (D + margin, N + margin)
    STABILITY_MARGIN = _int_env('GM_STABILITY_MARGIN', 5)

    # Worker threads for t-matrix column reductions
    WORKERS = _int_env('GM_WORKERS', 1)

    # Logging
    LOG_LEVEL = os.getenv('GM_LOG_LEVEL', 'WARNING').upper()
    LOG_FILE = os.getenv('GM_LOG_FILE')

    @classmethod
    def default_degree_bound(cls, total_degree):
        """x-degree bound used when none is given explicitly"""
        if isinstance(cls.PREC_X, int):
            return cls.PREC_X
        return max(10, 3 * total_degree)

    @classmethod
    def validate(cls):
        """Validate that all environment overrides are usable"""
        problems = []
        if not isinstance(cls.DEFAULT_PREC, int) or cls.DEFAULT_PREC < 2:
            problems.append(f"GM_DEFAULT_PREC={cls.DEFAULT_PREC!r} (integer >= 2 expected)")
        if cls.PREC_X is not None and (not isinstance(cls.PREC_X, int) or cls.PREC_X < 2):
            problems.append(f"GM_PREC_X={cls.PREC_X!r} (integer >= 2 expected)")
        if not isinstance(cls.MAX_PREC_X, int) or cls.MAX_PREC_X < 2:
            problems.append(f"GM_MAX_PREC_X={cls.MAX_PREC_X!r} (integer >= 2 expected)")
        if not isinstance(cls.STABILITY_MARGIN, int) or cls.STABILITY_MARGIN < 1:
            problems.append(f"GM_STABILITY_MARGIN={cls.STABILITY_MARGIN!r} (positive integer expected)")
        if not isinstance(cls.WORKERS, int) or cls.WORKERS < 1:
            problems.append(f"GM_WORKERS={cls.WORKERS!r} (positive integer expected)")

        if problems:
            raise ValueError(f"Invalid environment variables: {', '.join(problems)}")

        return True
