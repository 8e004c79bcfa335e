"""biomote: desk-scale simulator of a micro-implant ("biomote") talking to an
external reader over a magnetic-induction backscatter link.

Subsystems:

- :mod:`biomote.link`   inductive link budgets (coil impedances, coupling,
  round-trip backscatter power)
- :mod:`biomote.fec`    Hamming(15,11) and Reed-Solomon(31,26) codecs
- :mod:`biomote.phy`    ASK/BPSK Monte Carlo bit error rates over AWGN
- :mod:`biomote.mac`    multi-mote access: slotted ALOHA, CDMA, binary tree
- :mod:`biomote.cli`    reproducible CSV experiment runner
"""

from biomote.link import (
    Coil,
    LinkBudget,
    LinkConfig,
    NoiseModel,
    SingularityError,
    ac_resistance,
    backscatter_sweep,
    link_budget,
    mutual_inductance,
    reference_link_config,
    reflected_impedance,
    self_inductance,
    skin_depth,
)

__version__ = "0.1.0"
