// SPDX-License-Identifier: Apache-2.0
//
// spoofsim: wireless spoofing attack simulator
// Copyright (C) 2026 The spoofsim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>

// Little-endian scalar I/O independent of host byte order.
namespace spoofsim::binio {

template <typename U>
void put_le(std::ostream& os, U v) {
    unsigned char buf[sizeof(U)];
    for (std::size_t i = 0; i < sizeof(U); ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(buf), sizeof(U));
}

template <typename U>
U get_le(std::istream& is) {
    unsigned char buf[sizeof(U)];
    is.read(reinterpret_cast<char*>(buf), sizeof(U));
    if (!is) throw std::runtime_error("unexpected end of binary stream");
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(buf[i]) << (8 * i);
    return v;
}

inline void put_u32(std::ostream& os, std::uint32_t v) { put_le(os, v); }
inline void put_u64(std::ostream& os, std::uint64_t v) { put_le(os, v); }
inline void put_f64(std::ostream& os, double v) { put_le(os, std::bit_cast<std::uint64_t>(v)); }
inline std::uint32_t get_u32(std::istream& is) { return get_le<std::uint32_t>(is); }
inline std::uint64_t get_u64(std::istream& is) { return get_le<std::uint64_t>(is); }
inline double get_f64(std::istream& is) { return std::bit_cast<double>(get_le<std::uint64_t>(is)); }

}  // namespace spoofsim::binio
