"""Turbo-code library: UMTS constituent codes, log-MAP / max-log-MAP SISO
decoding with systematic and parity soft outputs, PCS/HDA/CRC early-stopping
criteria, and a reproducible AWGN Monte Carlo harness."""

from .channel import ChannelParams, add_noise, derive_params, modulate, to_channel_llr
from .constituent import (UMTS_SPEC, EncodedBlock, RscSpec, Trellis,
                          ViterbiPath, build_trellis, rsc_encode, viterbi_ml_path)
from .harness import (ExperimentConfig, SimRecord, crc_rate_shift_db, run_point,
                      run_sweep, wilson_interval, write_csv)
from .interleave import (Permutation, apply, apply_inverse,
                         build_random_interleaver, build_umts_interleaver,
                         identity_interleaver)
from .pipeline import (DecodeResult, DecoderConfig, EquivalenceReport,
                       TurboCodeword, run_equivalence_check, transmit_block,
                       turbo_decode, turbo_encode)
from .siso import (HardDecisions, RecursionWorkspace, SisoInput, SisoOutput,
                   branch_metrics, brute_force_marginals, hard_decide,
                   make_siso_input, max_star, siso_decode)
from .stopping import (CRC24, CrcSpec, HalfIterationSnapshot, StopDecision,
                       crc_attach, crc_check, genie_check, hda_check,
                       pcs_check, tie_guard)

__version__ = "0.1.0"

__all__ = [
    "ChannelParams", "add_noise", "derive_params", "modulate", "to_channel_llr",
    "UMTS_SPEC", "EncodedBlock", "RscSpec", "Trellis", "ViterbiPath",
    "build_trellis", "rsc_encode", "viterbi_ml_path",
    "ExperimentConfig", "SimRecord", "crc_rate_shift_db", "run_point",
    "run_sweep", "wilson_interval", "write_csv",
    "Permutation", "apply", "apply_inverse", "build_random_interleaver",
    "build_umts_interleaver", "identity_interleaver",
    "DecodeResult", "DecoderConfig", "EquivalenceReport", "TurboCodeword",
    "run_equivalence_check", "transmit_block", "turbo_decode", "turbo_encode",
    "HardDecisions", "RecursionWorkspace", "SisoInput", "SisoOutput",
    "branch_metrics", "brute_force_marginals", "hard_decide", "make_siso_input",
    "max_star", "siso_decode",
    "CRC24", "CrcSpec", "HalfIterationSnapshot", "StopDecision", "crc_attach",
    "crc_check", "genie_check", "hda_check", "pcs_check", "tie_guard",
]
