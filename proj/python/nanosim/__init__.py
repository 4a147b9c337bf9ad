"""Nanosensor network routing simulator."""

from ._nanosim import (  # noqa: F401
    FileError,
    InvalidInput,
    KalmanState,
    __version__,
    csv_columns,
    dump_config,
    kf_init,
    kf_predict,
    kf_update,
    link_quality,
    next_hop_count,
    run_batch,
    run_seed,
    similarity,
    stability_scores,
)
