"""
Choosing the metric parameters from one delay
=============================================

``tau`` is the delay beyond which two events are never considered the same
occurrence; ``t_max`` the largest delay still worth pairing. From these the
type weight, the time weight and the drop cost follow.
"""
from tseqclust import suggest_parameters

for tau, t_max in [(3, 20), (7, 16), (20, 20)]:
    s = suggest_parameters(tau, t_max)
    print(f"tau={tau:>2} t_max={t_max:>2}  ->  p_t={s.p_t:g}  p_e={s.p_e:g}  delta={s.delta:.4f}")

# %%
# Within ``tau`` days a change of event type always costs more than the delay.
s = suggest_parameters(3, 20)
delay = (s.p_t * s.tau**2) ** 0.5
type_change = (s.p_e * 2) ** 0.5  # one-hot vectors differ by 2 in squared norm
print(f"same type {s.tau:g} days apart: {delay:.2f}   type change, same date: {type_change:.2f}")
