"""Figure rendering for the command-line reports.

Every plot is written straight to a file with the Agg backend; nothing
here opens a window.  The functions take the same row data the CSV
serializer receives, so a figure and its CSV always agree.
"""

from __future__ import annotations

from pathlib import Path


def _plt():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_pdf_figure(
    grid_r,
    exact,
    approx,
    centers,
    hist_density,
    hist_stderr,
    path: str | Path,
) -> Path:
    """Nearest-distance densities: exact and approximate curves over the
    empirical histogram with 1-sigma error bars."""
    plt = _plt()
    fig, ax = plt.subplots(figsize=(7.0, 4.4))
    if len(centers) > 1:
        width = centers[1] - centers[0]
        ax.bar(
            centers,
            hist_density,
            width=width,
            color="0.85",
            edgecolor="0.6",
            linewidth=0.4,
            label="simulation histogram",
        )
        ax.errorbar(
            centers, hist_density, yerr=hist_stderr, fmt="none", ecolor="0.45", elinewidth=0.7
        )
    ax.plot(grid_r, exact, color="tab:blue", lw=1.6, label="exact form")
    ax.plot(grid_r, approx, color="tab:red", lw=1.4, ls="--", label="approximation")
    ax.set_xlabel("nearest-platform distance r [m]")
    ax.set_ylabel("density [1/m]")
    ax.legend(frameon=False)
    ax.margins(x=0)
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def render_sweep_figure(rows: list[dict], path: str | Path) -> Path:
    """D2D-use probability vs platform altitude, one line per
    (scheme, environment, threshold) series, with Monte Carlo error bars."""
    plt = _plt()
    fig, ax = plt.subplots(figsize=(7.0, 4.4))
    series: dict[tuple, list[dict]] = {}
    for row in rows:
        key = (row["scheme"], row["environment"], row["rss_th_dbm"])
        series.setdefault(key, []).append(row)
    for (scheme, env_name, th), pts in series.items():
        pts = sorted(pts, key=lambda r: r["L_m"])
        ls = "-" if scheme == "TDDS" else "--"
        label = f"{scheme} {env_name} RSSth={th:g} dBm"
        line, = ax.plot(
            [p["L_m"] for p in pts],
            [p["p_d2d_analytic"] for p in pts],
            ls,
            lw=1.5,
            label=label,
        )
        ax.errorbar(
            [p["L_m"] for p in pts],
            [p["p_d2d_mc_mean"] for p in pts],
            yerr=[3.0 * p["p_d2d_mc_stderr"] for p in pts],
            fmt="o",
            ms=3,
            color=line.get_color(),
            alpha=0.65,
            lw=0.8,
            capsize=2,
        )
    ax.set_xlabel("platform altitude L [m]")
    ax.set_ylabel("probability of D2D mode")
    ax.set_ylim(-0.02, 1.05)
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out
