#pragma once

#include <string_view>

namespace it2ipa {

enum class band { low = 0, medium = 1, high = 2 };

// Position relative to the main diagonal of the importance-performance map.
// weakness: importance band above performance band.
enum class zone { weakness, balanced, strength };

struct map_region {
  band importance = band::low;
  band performance = band::low;
  zone where = zone::balanced;

  friend bool operator==(const map_region&, const map_region&) = default;
};

constexpr std::string_view to_string(band b) noexcept {
  switch (b) {
    case band::low: return "low";
    case band::medium: return "medium";
    case band::high: return "high";
  }
  return "?";
}

constexpr std::string_view to_string(zone z) noexcept {
  switch (z) {
    case zone::weakness: return "weakness";
    case zone::balanced: return "balanced";
    case zone::strength: return "strength";
  }
  return "?";
}

}  // namespace it2ipa
