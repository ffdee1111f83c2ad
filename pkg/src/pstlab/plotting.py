"""Figures written next to the CSV output of ``evolve`` and ``xwalk``."""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

RC = {
    "font.size": 10,
    "axes.labelsize": 10,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "lines.linewidth": 1.2,
    "savefig.dpi": 150,
}


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_transfer(times, probs, path, pair, transfer_time=None):
    """|c_nm(t)|^2 against t, with the PST time marked when known."""
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(6, 3.2))
        ax.plot(times, probs, color="C0")
        if transfer_time is not None:
            ax.axvline(transfer_time, color="0.5", ls="--", lw=0.8)
        ax.set_xlabel("t")
        ax.set_ylabel(rf"$|c_{{{pair[0]}{pair[1]}}}(t)|^2$")
        ax.set_ylim(-0.02, 1.05)
        _save(fig, path)


def plot_xwalk(times, returns, endpoint, path, return_time=None):
    """Worst-vertex return probability and endpoint transfer probability."""
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(6, 3.2))
        ax.plot(times, returns, color="C0", label=r"$\min_n |c_{nn}(t)|^2$")
        ax.plot(times, endpoint, color="C3", label="endpoint transfer")
        if return_time is not None:
            ax.axvline(return_time, color="0.5", ls="--", lw=0.8)
        ax.set_xlabel("t")
        ax.set_ylabel("probability")
        ax.set_ylim(-0.02, 1.05)
        ax.legend(frameon=False, loc="lower center", bbox_to_anchor=(0.5, 1.0), ncol=2)
        _save(fig, path)
