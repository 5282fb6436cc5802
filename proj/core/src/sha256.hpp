#pragma once

#include <array>
#include <cstddef>
#include <span>

namespace memeground::detail {

using Sha256Digest = std::array<std::byte, 32>;

Sha256Digest sha256(std::span<const std::byte> data);

}  // namespace memeground::detail
