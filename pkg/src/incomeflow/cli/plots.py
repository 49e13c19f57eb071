"""Plot data as TSV plus gnuplot scripts, one per fitted curve."""

from pathlib import Path

from incomeflow.empirical.models import CcdfCurve
from incomeflow.fitting.report import overlay_frame
from incomeflow.model.params import EyShape

GNUPLOT_TEMPLATE = """\
# {title}
set terminal pngcairo size 900,650
set output "{image}"
set logscale xy
set format x "10^{{%T}}"
set format y "10^{{%T}}"
set xlabel "income (EUR/year)"
set ylabel "exceedance P(income > m)"
set key bottom left
set arrow from {m0:.10g}, graph 0 to {m0:.10g}, graph 1 nohead dashtype 3
set arrow from {m1:.10g}, graph 0 to {m1:.10g}, graph 1 nohead dashtype 2
plot "{data}" skip 1 using 1:2 with points pt 7 ps 0.4 title "empirical", \\
     "{data}" skip 1 using 1:3 with lines linewidth 2 title "model"
"""


def write_overlay(c: CcdfCurve, p: EyShape, path: Path | str) -> Path:
    """Write `income<TAB>empirical<TAB>model`, the model recomputed at each income."""
    path = Path(path)
    overlay_frame(c, p).to_csv(path, sep="\t", index=False, float_format="%.17g")
    return path


def write_gnuplot(
    overlay: Path | str, p: EyShape, path: Path | str, title: str = ""
) -> Path:
    """Gnuplot script drawing the overlay with dotted m0 and dashed m1 markers."""
    overlay = Path(overlay)
    path = Path(path)
    script = GNUPLOT_TEMPLATE.format(
        title=title or overlay.stem,
        image=overlay.with_suffix(".png").name,
        data=overlay.name,
        m0=p.m0,
        m1=p.m1,
    )
    path.write_text(script, encoding="utf-8")
    return path
