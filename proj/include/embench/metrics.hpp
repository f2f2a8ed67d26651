#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "embench/error.hpp"

namespace embench {

/// Lowercased alphanumeric runs; everything else separates tokens.
inline std::vector<std::string> tokenize_text(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    if (c < 128 && std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

/// First standalone option letter A-E, case-insensitive.
inline std::optional<char> extract_choice(std::string_view text) {
  auto alnum = [](char ch) {
    const auto c = static_cast<unsigned char>(ch);
    return c < 128 && std::isalnum(c);
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char u = static_cast<char>(std::toupper(static_cast<unsigned char>(text[i])));
    if (u < 'A' || u > 'E') continue;
    const bool left = i == 0 || !alnum(text[i - 1]);
    const bool right = i + 1 == text.size() || !alnum(text[i + 1]);
    if (left && right) return u;
  }
  return std::nullopt;
}

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

inline std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

inline RougeScore rouge_l(const std::vector<std::string>& cand, const std::vector<std::string>& ref) {
  if (ref.empty()) throw data_error("rouge_l: empty reference");
  if (cand.empty()) return {};
  const auto l = static_cast<double>(lcs_length(cand, ref));
  RougeScore s;
  s.precision = l / static_cast<double>(cand.size());
  s.recall = l / static_cast<double>(ref.size());
  s.f1 = l == 0.0 ? 0.0 : 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

/// Sentence BLEU: geometric mean of clipped n-gram precisions (n = 1..max_n,
/// uniform weights), add-one smoothing for zero matches at n >= 2, times the
/// brevity penalty.
inline double bleu(const std::vector<std::string>& cand, const std::vector<std::string>& ref, int max_n = 4) {
  if (ref.empty()) throw data_error("bleu: empty reference");
  if (max_n < 1) throw config_error("bleu: max_n must be >= 1");
  if (cand.empty()) return 0.0;
  auto ngrams = [](const std::vector<std::string>& t, int n) {
    std::map<std::vector<std::string>, int> c;
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= t.size(); ++i) {
      ++c[std::vector<std::string>(t.begin() + static_cast<std::ptrdiff_t>(i),
                                   t.begin() + static_cast<std::ptrdiff_t>(i) + n)];
    }
    return c;
  };
  double log_sum = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    const auto cc = ngrams(cand, n), rc = ngrams(ref, n);
    double match = 0.0, total = 0.0;
    for (const auto& [g, k] : cc) {
      total += k;
      const auto it = rc.find(g);
      if (it != rc.end()) match += std::min(k, it->second);
    }
    double p;
    if (match > 0.0) {
      p = match / total;
    } else if (n >= 2) {
      p = 1.0 / (total + 1.0);
    } else {
      return 0.0;
    }
    log_sum += std::log(p) / max_n;
  }
  const auto c = static_cast<double>(cand.size()), r = static_cast<double>(ref.size());
  const double bp = c < r ? std::exp(1.0 - r / c) : 1.0;
  return bp * std::exp(log_sum);
}

}  // namespace embench
