#pragma once

#include <cstdint>
#include <iosfwd>

#include "msdict/ms_dict.hpp"

namespace msdict {

inline constexpr char kSnapshotMagic[8] = {'M', 'S', 'D', 'I', 'C', 'T', 'S', '\0'};
inline constexpr std::uint64_t kSnapshotVersion = 1;

// Little-endian, 64-bit aligned dump of a dense dictionary. The layout is
// documented in docs/snapshot-format.md. Hash functions are not stored;
// they are re-derived from the seed in the embedded configuration.
void save_snapshot(const MsDict& d, std::ostream& out);

// Throws std::runtime_error on a malformed or incompatible stream.
MsDict load_snapshot(std::istream& in);

}  // namespace msdict
