"""Baseband link simulator for the fixed WiMAX (IEEE 802.16 OFDM) PHY layer.

Transmit chain: randomizer -> Reed-Solomon -> convolutional code with
puncturing -> block interleaver -> constellation mapper -> 256-point OFDM
with cyclic prefix.  Channels: AWGN and the six SUI tapped-delay-line
models.  The harness module estimates BER over SNR grids; the cli module
wraps it all as a batch tool emitting CSV/JSON curves.
"""

__version__ = "0.1.0"
