"""Matplotlib rendering of BER curves, written next to the delimited output."""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

_MARKERS = "osd^v<>ph"


def render_ber_figure(curves: dict, path: str, xlabel: str = "SNR (dB)", title: str | None = None) -> str:
    """Render labeled BER curves (semilog-y) to an image file.

    curves: {label: BerCurve}.  Zero-error points cannot appear on a log
    axis and are dropped from the trace.
    """
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    for i, (label, curve) in enumerate(curves.items()):
        xs = [p.snr_db for p in curve.points if p.bit_errors > 0]
        ys = [p.ber for p in curve.points if p.bit_errors > 0]
        ax.semilogy(xs, ys, marker=_MARKERS[i % len(_MARKERS)], label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("BER")
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.4)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
