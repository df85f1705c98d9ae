#include "aisched/gene_library.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "aisched/error.hpp"
#include "aisched/random.hpp"

namespace aisched {

GeneLibrary init_libraries(std::uint64_t seed, std::size_t libraries, std::size_t components, std::size_t component_length,
                           std::span<const JobId> job_ids, double wildcard_rate) {
  if (libraries == 0 || components == 0 || component_length == 0 || job_ids.empty()) {
    throw Error(ErrorCode::InvalidShape, "libraries, components, component length and job ids must all be non-empty");
  }
  if (!(wildcard_rate >= 0.0 && wildcard_rate <= 1.0)) throw Error(ErrorCode::InvalidShape, "wildcard rate must lie in [0, 1]");

  Rng rng(derive_seed(seed, {0x9e11b}));
  GeneLibrary library;
  library.component_length = component_length;
  library.wildcard_rate = wildcard_rate;
  library.libraries.assign(libraries, std::vector<Component>(components, Component(component_length, kWildcard)));
  for (auto& lib : library.libraries) {
    for (auto& component : lib) {
      for (auto& symbol : component) {
        symbol = rng.bernoulli(wildcard_rate) ? kWildcard : job_ids[rng.index(job_ids.size())];
      }
    }
  }
  return library;
}

Antibody express(const GeneLibrary& library, std::span<const std::size_t> indices) {
  if (indices.size() != library.library_count()) {
    throw Error(ErrorCode::IndexOutOfRange, "expected one index per library (" + std::to_string(library.library_count()) + ")");
  }
  Antibody antibody;
  antibody.symbols.reserve(library.antibody_length());
  std::unordered_set<JobId> seen;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= library.libraries[i].size()) {
      throw Error(ErrorCode::IndexOutOfRange, "index " + std::to_string(indices[i]) + " for library " + std::to_string(i));
    }
    for (JobId symbol : library.libraries[i][indices[i]]) {
      if (symbol != kWildcard && !seen.insert(symbol).second) symbol = kWildcard;
      antibody.symbols.push_back(symbol);
    }
  }
  return antibody;
}

std::uint64_t expressible_count(std::uint64_t libraries, std::uint64_t components) {
  if (libraries == 0 || components == 0) throw Error(ErrorCode::InvalidShape, "l and c must be positive");
  std::uint64_t count = 1;
  for (std::uint64_t i = 0; i < libraries; ++i) {
    if (count > std::numeric_limits<std::uint64_t>::max() / components) {
      throw Error(ErrorCode::Overflow, std::to_string(components) + "^" + std::to_string(libraries) + " exceeds 64 bits");
    }
    count *= components;
  }
  return count;
}

std::string format_library(const GeneLibrary& library) {
  std::ostringstream out;
  out << library.library_count() << ' ' << library.components_per_library() << ' ' << library.component_length << ' '
      << library.wildcard_rate << '\n';
  for (const auto& lib : library.libraries) {
    for (const auto& component : lib) {
      for (std::size_t k = 0; k < component.size(); ++k) {
        if (k > 0) out << ' ';
        if (component[k] == kWildcard) {
          out << '*';
        } else {
          out << component[k];
        }
      }
      out << '\n';
    }
  }
  return out.str();
}

GeneLibrary parse_library(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::size_t l = 0;
  std::size_t c = 0;
  GeneLibrary library;
  if (!(in >> l >> c >> library.component_length >> library.wildcard_rate) || l == 0 || c == 0 || library.component_length == 0) {
    throw Error(ErrorCode::InvalidShape, "bad library header");
  }
  library.libraries.assign(l, std::vector<Component>(c, Component(library.component_length, kWildcard)));
  for (auto& lib : library.libraries) {
    for (auto& component : lib) {
      for (auto& symbol : component) {
        std::string token;
        if (!(in >> token)) throw Error(ErrorCode::InvalidShape, "library text ends early");
        if (token == "*") continue;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), symbol);
        if (ec != std::errc{} || ptr != token.data() + token.size() || symbol <= 0) {
          throw Error(ErrorCode::InvalidShape, "bad component symbol " + token);
        }
      }
    }
  }
  return library;
}

}  // namespace aisched
