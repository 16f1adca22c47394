"""Frozen delay curves at lambda = 1, r = 0.5, indexed by delta_d.

Pairs are ``(delta_d, value)``; ``*_P0`` is the zero-delay probability
and ``*_MEAN`` the expected vehicle delay.
"""

FIFO_P0 = [
    (0.0, 1.0),
    (0.1, 0.955570613124297),
    (0.2, 0.911206705820018),
    (0.3, 0.866934291250423),
    (0.4, 0.822758989637161),
    (0.5, 0.778674299135476),
    (0.6, 0.734665735088739),
    (0.7, 0.690713420092946),
    (0.8, 0.646793933427123),
    (0.9, 0.602881714435315),
    (1.0, 0.558950208768488),
    (1.1, 0.514972914675812),
    (1.2, 0.470924231226487),
    (1.3, 0.426780271320738),
    (1.4, 0.382519453785139),
    (1.5, 0.338123255226808),
    (1.6, 0.293576949850079),
    (1.7, 0.248869279149836),
    (1.8, 0.203993737212779),
    (1.9, 0.158948037032718),
    (2.0, 0.113735483737439),
    (2.1, 0.0683635590520127),
    (2.2, 0.0228704037500044),
    (2.25, 0.0),
]

FO_P0 = [
    (0.0, 1.0),
    (0.1, 0.955593529819917),
    (0.2, 0.911420860772511),
    (0.3, 0.86772673422456),
    (0.4, 0.824756742372809),
    (0.5, 0.782745731852991),
    (0.6, 0.741907822478749),
    (0.7, 0.702428744655418),
    (0.8, 0.664460821291946),
    (0.9, 0.62812057891229),
    (1.0, 0.593488707453784),
    (1.1, 0.560611918869482),
    (1.2, 0.529506180434767),
    (1.3, 0.500160803505228),
    (1.4, 0.472542928487383),
    (1.5, 0.446602037198903),
    (1.6, 0.422274223669639),
    (1.7, 0.399486048828962),
    (1.8, 0.378157884667977),
    (1.9, 0.358206715717499),
    (2.0, 0.339548410026839),
    (2.1, 0.322099500393977),
    (2.2, 0.305778532481237),
    (2.3, 0.290507042907138),
    (2.4, 0.276210230375783),
    (2.5, 0.26281737880072),
    (2.6, 0.250262085033351),
    (2.7, 0.238482336518903),
    (2.8, 0.227420476839028),
    (2.9, 0.217023090184718),
    (3.0, 0.207240829617908),
    (3.1, 0.198028208639928),
    (3.2, 0.189343371098489),
    (3.3, 0.181147850778229),
    (3.4, 0.173406329046855),
    (3.5, 0.166086396570915),
    (3.6, 0.159158323273775),
    (3.7, 0.152594839291598),
    (3.8, 0.146370928609858),
    (3.9, 0.140463636263206),
    (4.0, 0.134851889397026),
]

FIFO_MEAN = [
    (0.0, 0.0),
    (0.1, 0.00232021673473125),
    (0.2, 0.00972492775928612),
    (0.3, 0.0229962925142535),
    (0.4, 0.043101526448842),
    (0.5, 0.071248192968207),
    (0.6, 0.108960037035903),
    (0.7, 0.158181302002907),
    (0.8, 0.221423103510468),
    (0.9, 0.301973855799483),
    (1.0, 0.404209626403348),
    (1.1, 0.534064859773907),
    (1.2, 0.699771266042273),
    (1.3, 0.913061600776453),
    (1.4, 1.19122320773131),
    (1.5, 1.560790140904),
    (1.6, 2.06463883936337),
    (1.7, 2.77684446416148),
    (1.8, 3.83729613227624),
    (1.9, 5.54570486527913),
    (2.0, 8.68101899601102),
    (2.1, 16.098179264254),
]

FO_MEAN = [
    (0.0, 0.0),
    (0.1, 0.00225538787602057),
    (0.2, 0.00912245194765404),
    (0.3, 0.0206797205999381),
    (0.4, 0.0369093804737392),
    (0.5, 0.0577029434655211),
    (0.6, 0.0828717976310822),
    (0.7, 0.112161302757422),
    (0.8, 0.145266867125056),
    (0.9, 0.181850478642161),
    (1.0, 0.221556395058428),
    (1.1, 0.264025041297929),
    (1.2, 0.308904537084788),
    (1.3, 0.355859622738178),
    (1.4, 0.404578027190447),
    (1.5, 0.45477451499584),
    (1.6, 0.506192961080672),
    (1.7, 0.558606846674801),
    (1.8, 0.611818565110043),
    (1.9, 0.665657889701508),
    (2.0, 0.719979902731249),
    (2.1, 0.77466262584651),
    (2.2, 0.829604535436775),
    (2.3, 0.884722096079807),
    (2.4, 0.939947402899973),
    (2.5, 0.995225990023453),
    (2.6, 1.05051483664977),
    (2.7, 1.10578058350932),
    (2.8, 1.16099795939824),
    (2.9, 1.21614840885882),
    (3.0, 1.27121890682139),
    (3.1, 1.32620094323141),
    (3.2, 1.38108965962279),
    (3.3, 1.43588311970035),
    (3.4, 1.4905816968373),
    (3.5, 1.54518756267032),
    (3.6, 1.59970426246778),
    (3.7, 1.65413636450985),
    (3.8, 1.70848917225492),
    (3.9, 1.7627684895173),
    (4.0, 1.81698043021357),
]
