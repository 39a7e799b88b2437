"""Exploratory: does the ball still win when beta is small? The margins
below are recorded together with their error bounds; nothing is asserted."""
import numpy as np

from robindrift import DomainSpec, small_beta_study

for text in ("ellipse(2,0.5)", "ellipse(1.2,0.8333333333333334)", "stadium(2,0.5)"):
    rep = small_beta_study(DomainSpec.parse(text), tau=1.0, h=0.05, betas=np.logspace(-3, 0, 4))
    print(text)
    for b, m, e in zip(rep.betas, rep.margins, rep.error_bound):
        flag = "positive" if m > e else ("negative" if m < -e else "inconclusive")
        print(f"  beta={b:<8g} margin={m:+.3e}  bound={e:.1e}  {flag}")
