#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aisched/matching.hpp"

namespace aisched {

using Component = std::vector<JobId>;

/// `l` libraries of `c` fixed-length components each. Picking one component
/// per library and concatenating them expresses an antibody, so one library
/// set can express c^l antibodies.
struct GeneLibrary {
  std::vector<std::vector<Component>> libraries;
  std::size_t component_length = 0;
  double wildcard_rate = 0.0;

  std::size_t library_count() const { return libraries.size(); }
  std::size_t components_per_library() const { return libraries.empty() ? 0 : libraries.front().size(); }
  std::size_t antibody_length() const { return library_count() * component_length; }

  bool operator==(const GeneLibrary&) const = default;
};

GeneLibrary init_libraries(std::uint64_t seed, std::size_t libraries, std::size_t components, std::size_t component_length,
                           std::span<const JobId> job_ids, double wildcard_rate);

/// Concatenates libraries[i][indices[i]]. Repeated job ids after their first
/// occurrence are replaced by wildcards.
Antibody express(const GeneLibrary& library, std::span<const std::size_t> indices);

/// c^l; throws Overflow if it does not fit in 64 bits.
std::uint64_t expressible_count(std::uint64_t libraries, std::uint64_t components);

// Text form: header `l c component_length wildcard_rate`, then l*c lines of
// space-separated symbols (library-major), `*` for wildcards.
std::string format_library(const GeneLibrary& library);
GeneLibrary parse_library(std::string_view text);

}  // namespace aisched
