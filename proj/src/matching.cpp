#include "aisched/matching.hpp"

#include <algorithm>
#include <charconv>

#include "aisched/error.hpp"

namespace aisched {

std::size_t Antibody::wildcard_count() const {
  return static_cast<std::size_t>(std::count(symbols.begin(), symbols.end(), kWildcard));
}

int alignment_score(std::span<const JobId> antibody, std::span<const JobId> antigen, std::size_t offset) {
  if (antibody.size() > antigen.size() || offset > antigen.size() - antibody.size()) {
    throw Error(ErrorCode::OffsetOutOfRange, "offset " + std::to_string(offset) + " does not keep the antibody inside the antigen");
  }
  int score = 0;
  for (std::size_t i = 0; i < antibody.size(); ++i) {
    if (antibody[i] == kWildcard) {
      score += kWildcardMatchScore;
    } else if (antibody[i] == antigen[offset + i]) {
      score += kPerfectMatchScore;
    }
  }
  return score;
}

int alignment_score(const Antibody& antibody, const Antigen& antigen, std::size_t offset) {
  return alignment_score(antibody.symbols, antigen.sequence, offset);
}

int match_score(std::span<const JobId> antibody, std::span<const JobId> antigen) {
  if (antibody.size() >= antigen.size()) {
    throw Error(ErrorCode::AntibodyTooLong, "antibody of length " + std::to_string(antibody.size()) +
                                                " is not shorter than antigen of length " + std::to_string(antigen.size()));
  }
  int best = 0;
  for (std::size_t offset = 0; offset + antibody.size() <= antigen.size(); ++offset) {
    best = std::max(best, alignment_score(antibody, antigen, offset));
  }
  return best;
}

int match_score(const Antibody& antibody, const Antigen& antigen) { return match_score(antibody.symbols, antigen.sequence); }

int antigen_deficit(const Antigen& antigen, std::span<const Antibody> antibodies) {
  if (antibodies.empty()) throw Error(ErrorCode::EmptyAntibodySet, "no antibodies to match against");
  std::size_t winner = 0;
  int best = -1;
  for (std::size_t i = 0; i < antibodies.size(); ++i) {
    const int score = match_score(antibodies[i], antigen);
    if (score > best) {
      best = score;
      winner = i;
    }
  }
  return kPerfectMatchScore * static_cast<int>(antibodies[winner].size()) - best;
}

std::string format_symbols(std::span<const JobId> symbols) {
  std::string out;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (i > 0) out += ',';
    out += symbols[i] == kWildcard ? std::string("*") : std::to_string(symbols[i]);
  }
  return out;
}

std::vector<JobId> parse_symbols(std::string_view text) {
  std::vector<JobId> symbols;
  if (text.empty()) return symbols;
  if (text.find(',') == std::string_view::npos) {
    for (char ch : text) {
      if (ch == '*') {
        symbols.push_back(kWildcard);
      } else if (ch >= '1' && ch <= '9') {
        symbols.push_back(ch - '0');
      } else {
        throw Error(ErrorCode::MalformedSymbols, "bad symbol '" + std::string(1, ch) + "' in \"" + std::string(text) + "\"");
      }
    }
    return symbols;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    const std::string_view token = text.substr(pos, comma - pos);
    if (token == "*") {
      symbols.push_back(kWildcard);
    } else {
      JobId id = 0;
      const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), id);
      if (ec != std::errc{} || ptr != token.data() + token.size() || id <= 0) {
        throw Error(ErrorCode::MalformedSymbols, "bad token \"" + std::string(token) + "\"");
      }
      symbols.push_back(id);
    }
    pos = comma + 1;
  }
  return symbols;
}

}  // namespace aisched
