#pragma once

// Machine-specific constants, measured once on this instruction set by
// tools/calibrate and frozen here as regression bounds. Rerun the calibrator
// after any change to the instruction encoding or the circuit codec; the
// test suite checks the measurements still fit under these values.

namespace queasylab::constants {

/// c1: ic(x) <= cd(x) + c1 across the measured corpus.
inline constexpr int kChainIcCdSlack = 0;

/// c2: cd(x) <= c(x) + c2 across the measured corpus.
inline constexpr int kChainCdCSlack = 22;

/// c_enc: quantum witnesses cost at most this many extra bits over their
/// classical counterparts (qcd <= cd + c_enc, qic <= ic + c_enc), measured
/// through the literal-emitter embedding.
inline constexpr int kQuantumEncodingSlack = 82;

/// c_rep: compressing x twice costs at most c_rep bits over compressing x.
inline constexpr int kCompressorRepetitionSlack = 32;

}  // namespace queasylab::constants
