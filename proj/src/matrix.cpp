#include "goeritz/matrix.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "json.hpp"

namespace goeritz {

namespace {

using i128 = __int128;

constexpr i128 kOverflowGuard = (i128(1) << 100);

void guard(i128 v) {
  if (v > kOverflowGuard || v < -kOverflowGuard)
    throw std::overflow_error("matrix arithmetic exceeded 128-bit safety bound");
}

/// Gaussian integer on 128-bit components, for fraction-free elimination.
struct G128 {
  i128 re = 0, im = 0;
  bool zero() const { return re == 0 && im == 0; }
  friend G128 operator*(G128 a, G128 b) {
    guard(a.re); guard(a.im); guard(b.re); guard(b.im);
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend G128 operator-(G128 a, G128 b) { return {a.re - b.re, a.im - b.im}; }
};

/// Exact division a / b (throws if not exact, which would indicate a logic
/// error in Bareiss elimination).
G128 div_exact(G128 a, G128 b) {
  i128 nb = b.re * b.re + b.im * b.im;
  if (nb == 0) throw std::runtime_error("internal: division by zero in elimination");
  i128 re = a.re * b.re + a.im * b.im;
  i128 im = a.im * b.re - a.re * b.im;
  if (re % nb != 0 || im % nb != 0)
    throw std::runtime_error("internal: inexact division in elimination");
  return {re / nb, im / nb};
}

GaussianInt narrow(G128 v) {
  guard(v.re); guard(v.im);
  if (v.re > INT64_MAX || v.re < INT64_MIN || v.im > INT64_MAX || v.im < INT64_MIN)
    throw std::overflow_error("determinant does not fit in 64-bit components");
  return {static_cast<std::int64_t>(v.re), static_cast<std::int64_t>(v.im)};
}

GaussianInt bareiss_det(std::vector<G128> m, std::size_t n) {
  if (n == 0) return GaussianInt{1};
  auto at = [&](std::size_t i, std::size_t j) -> G128& { return m[i * n + j]; };
  G128 prev{1, 0};
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (at(k, k).zero()) {
      std::size_t r = k + 1;
      while (r < n && at(r, k).zero()) ++r;
      if (r == n) return GaussianInt{0};
      for (std::size_t j = 0; j < n; ++j) std::swap(at(k, j), at(r, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        at(i, j) = div_exact(at(i, j) * at(k, k) - at(i, k) * at(k, j), prev);
    prev = at(k, k);
  }
  GaussianInt d = narrow(at(n - 1, n - 1));
  return sign == 1 ? d : -d;
}

nlohmann::json parse_json(const std::string& text) {
  auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw std::invalid_argument("malformed JSON");
  return j;
}

}  // namespace

GaussianInt GaussianInt::parse(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty Gaussian integer literal");
  // Split into at most two signed terms; a trailing 'i' marks the imaginary one.
  std::int64_t re = 0, im = 0;
  std::size_t pos = 0;
  int terms = 0;
  while (pos < s.size()) {
    if (++terms > 2) throw std::invalid_argument("bad Gaussian integer: " + s);
    std::size_t start = pos;
    if (s[pos] == '+' || s[pos] == '-') ++pos;
    std::size_t digits_begin = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    bool imag = pos < s.size() && s[pos] == 'i';
    std::string num = s.substr(start, pos - start);
    if (num.empty() || num == "+" || num == "-") {
      if (!imag) throw std::invalid_argument("bad Gaussian integer: " + s);
      num += "1";  // "i" / "-i" / "+i"
    }
    if (digits_begin == pos && !imag)
      throw std::invalid_argument("bad Gaussian integer: " + s);
    std::int64_t v = 0;
    try {
      v = std::stoll(num);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad Gaussian integer: " + s);
    }
    if (imag) {
      im += v;
      ++pos;  // consume 'i'
    } else {
      re += v;
    }
  }
  return {re, im};
}

LabeledSymMatrix::LabeledSymMatrix(std::vector<std::string> labels)
    : labels_(std::move(labels)) {
  std::sort(labels_.begin(), labels_.end());
  if (std::adjacent_find(labels_.begin(), labels_.end()) != labels_.end())
    throw std::invalid_argument("duplicate matrix labels");
  data_.assign(labels_.size() * labels_.size(), GaussianInt{});
}

bool LabeledSymMatrix::has_label(const std::string& l) const {
  return std::binary_search(labels_.begin(), labels_.end(), l);
}

std::size_t LabeledSymMatrix::index_of(const std::string& l) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), l);
  if (it == labels_.end() || *it != l)
    throw std::out_of_range("no matrix label '" + l + "'");
  return static_cast<std::size_t>(it - labels_.begin());
}

GaussianInt LabeledSymMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= size() || j >= size()) throw std::out_of_range("matrix index out of range");
  return data_[i * size() + j];
}

GaussianInt LabeledSymMatrix::at(const std::string& a, const std::string& b) const {
  return at(index_of(a), index_of(b));
}

void LabeledSymMatrix::set(std::size_t i, std::size_t j, GaussianInt v) {
  if (i >= size() || j >= size()) throw std::out_of_range("matrix index out of range");
  data_[i * size() + j] = v;
  data_[j * size() + i] = v;
}

void LabeledSymMatrix::set(const std::string& a, const std::string& b, GaussianInt v) {
  set(index_of(a), index_of(b), v);
}

void LabeledSymMatrix::add(const std::string& a, const std::string& b, GaussianInt v) {
  std::size_t i = index_of(a), j = index_of(b);
  set(i, j, at(i, j) + v);
}

bool LabeledSymMatrix::is_real() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](GaussianInt v) { return v.is_real(); });
}

void LabeledSymMatrix::enforce_zero_row_sums() {
  for (std::size_t i = 0; i < size(); ++i) {
    GaussianInt sum{};
    for (std::size_t j = 0; j < size(); ++j)
      if (j != i) sum += at(i, j);
    set(i, i, -sum);
  }
}

LabeledSymMatrix LabeledSymMatrix::reduce(const std::string& label) const {
  std::size_t drop = index_of(label);
  std::vector<std::string> keep;
  for (std::size_t i = 0; i < size(); ++i)
    if (i != drop) keep.push_back(labels_[i]);
  LabeledSymMatrix out(keep);
  for (std::size_t i = 0, oi = 0; i < size(); ++i) {
    if (i == drop) continue;
    for (std::size_t j = 0, oj = 0; j < size(); ++j) {
      if (j == drop) continue;
      out.set(oi, oj, at(i, j));
      ++oj;
    }
    ++oi;
  }
  return out;
}

LabeledSymMatrix LabeledSymMatrix::reduce_first() const {
  if (size() == 0) throw std::invalid_argument("cannot reduce an empty matrix");
  return reduce(labels_.front());
}

LabeledSymMatrix LabeledSymMatrix::adjust(int beta) const {
  if (beta <= 0)
    throw std::invalid_argument("adjust requires a positive component count");
  std::vector<std::string> ls = labels_;
  for (int k = 1; k < beta; ++k) {
    std::string pad = "_z" + std::to_string(k);
    while (has_label(pad)) pad += "'";
    ls.push_back(pad);
  }
  LabeledSymMatrix out(ls);
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i; j < size(); ++j)
      out.set(labels_[i], labels_[j], at(i, j));
  return out;
}

std::vector<int> LabeledSymMatrix::canonical_search() const {
  const int n = static_cast<int>(size());
  if (n == 0) return {};
  auto ent = [&](int i, int j) { return data_[static_cast<std::size_t>(i) * n + j]; };

  // Iterated neighborhood refinement: rows get colors that only automorphic
  // rows can share.  Color names are assigned in sorted-signature order so
  // they agree between relabeled copies of one matrix; the canonical order
  // below may then use them as tiebreaks.
  std::vector<int> color(n, 0);
  {
    auto rename = [n](const std::vector<std::vector<std::int64_t>>& sig,
                      std::vector<int>& col) {
      std::map<std::vector<std::int64_t>, int> ids;
      for (int i = 0; i < n; ++i) ids.try_emplace(sig[i], 0);
      int next_id = 0;
      for (auto& [k, v] : ids) v = next_id++;
      for (int i = 0; i < n; ++i) col[i] = ids.at(sig[i]);
    };
    std::vector<std::vector<std::int64_t>> sig(n);
    for (int i = 0; i < n; ++i) {
      std::vector<std::pair<std::int64_t, std::int64_t>> row;
      for (int j = 0; j < n; ++j)
        if (j != i) row.push_back({ent(i, j).re, ent(i, j).im});
      std::sort(row.begin(), row.end());
      sig[i] = {ent(i, i).re, ent(i, i).im};
      for (auto& p : row) { sig[i].push_back(p.first); sig[i].push_back(p.second); }
    }
    rename(sig, color);
    for (int round = 0; round < n; ++round) {
      for (int i = 0; i < n; ++i) {
        std::vector<std::vector<std::int64_t>> nb;
        for (int j = 0; j < n; ++j)
          if (j != i) nb.push_back({color[j], ent(i, j).re, ent(i, j).im});
        std::sort(nb.begin(), nb.end());
        sig[i] = {color[i]};
        for (auto& v : nb) sig[i].insert(sig[i].end(), v.begin(), v.end());
      }
      std::vector<int> next(n);
      rename(sig, next);
      bool changed = false;
      for (int i = 0; i < n && !changed; ++i)
        for (int j = i + 1; j < n && !changed; ++j)
          changed = (color[i] == color[j]) != (next[i] == next[j]);
      color = next;
      if (!changed) break;
    }
  }

  // Branch-and-bound over orderings minimizing the flattened lower-triangle
  // encoding.  At each level only candidates with the minimal next block can
  // extend a minimal encoding; among those, rows whose transposition is an
  // automorphism of the whole matrix are interchangeable and only one is
  // explored.
  std::vector<int> best_order;
  std::vector<std::int64_t> best_key;
  bool have_best = false;
  std::vector<int> order;
  std::vector<std::int64_t> key;
  std::vector<char> used(n, 0);

  auto profile = [&](int c) {
    std::vector<std::int64_t> p;
    p.reserve(2 * order.size() + 4);
    for (int k : order) { p.push_back(ent(c, k).re); p.push_back(ent(c, k).im); }
    p.push_back(ent(c, c).re);
    p.push_back(ent(c, c).im);
    p.push_back(color[c]);  // refinement color breaks ties cheaply but stably
    return p;
  };
  auto swap_automorphic = [&](int x, int y) {
    if (ent(x, x) != ent(y, y)) return false;
    for (int z = 0; z < n; ++z)
      if (z != x && z != y && ent(x, z) != ent(y, z)) return false;
    return true;
  };

  auto dfs = [&](auto&& self) -> void {
    if (static_cast<int>(order.size()) == n) {
      if (!have_best || key < best_key) {
        best_key = key;
        best_order = order;
        have_best = true;
      }
      return;
    }
    std::vector<int> cands;
    std::vector<std::int64_t> best_profile;
    for (int c = 0; c < n; ++c) {
      if (used[c]) continue;
      auto p = profile(c);
      if (cands.empty() || p < best_profile) {
        best_profile = std::move(p);
        cands.assign(1, c);
      } else if (p == best_profile) {
        cands.push_back(c);
      }
    }
    std::vector<int> uniq;
    for (int c : cands) {
      bool dup = false;
      for (int u : uniq)
        if (swap_automorphic(u, c)) { dup = true; break; }
      if (!dup) uniq.push_back(c);
    }
    std::size_t base = key.size();
    for (int c : uniq) {
      key.insert(key.end(), best_profile.begin(), best_profile.end());
      if (have_best) {
        // Compare against the best key's prefix of the same length.
        bool worse = false, better = false;
        for (std::size_t t = base; t < key.size(); ++t) {
          if (key[t] != best_key[t]) { worse = key[t] > best_key[t]; better = !worse; break; }
        }
        if (worse) { key.resize(base); continue; }
        (void)better;
      }
      used[c] = 1;
      order.push_back(c);
      self(self);
      order.pop_back();
      used[c] = 0;
      key.resize(base);
    }
  };
  dfs(dfs);
  return best_order;
}

std::vector<std::int64_t> LabeledSymMatrix::canonical_key() const {
  auto ord = canonical_search();
  const int n = static_cast<int>(size());
  std::vector<std::int64_t> key;
  key.push_back(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      GaussianInt v = at(static_cast<std::size_t>(ord[i]), static_cast<std::size_t>(ord[j]));
      key.push_back(v.re);
      key.push_back(v.im);
    }
  }
  return key;
}

std::vector<std::string> LabeledSymMatrix::canonical_order() const {
  auto ord = canonical_search();
  std::vector<std::string> out;
  out.reserve(ord.size());
  for (int i : ord) out.push_back(labels_[static_cast<std::size_t>(i)]);
  return out;
}

std::optional<std::map<std::string, std::string>> bijection_equal(
    const LabeledSymMatrix& a, const LabeledSymMatrix& b) {
  if (a.size() != b.size()) return std::nullopt;
  if (a.canonical_key() != b.canonical_key()) return std::nullopt;
  auto oa = a.canonical_order();
  auto ob = b.canonical_order();
  std::map<std::string, std::string> witness;
  for (std::size_t k = 0; k < oa.size(); ++k) witness[oa[k]] = ob[k];
  return witness;
}

bool congruence_verify(const IntMatrix& U, const LabeledSymMatrix& a,
                       const LabeledSymMatrix& b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw std::invalid_argument("congruence: size mismatch");
  if (!a.is_real() || !b.is_real())
    throw std::invalid_argument("congruence check requires integer matrices");
  if (U.size() != n) throw std::invalid_argument("congruence: witness row count mismatch");
  for (const auto& row : U)
    if (row.size() != n)
      throw std::invalid_argument("congruence: witness column count mismatch");
  if (n == 0) return true;
  if (std::llabs(int_determinant(U)) != 1) return false;

  // t = U * a
  std::vector<i128> t(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (U[i][k] == 0) continue;
      for (std::size_t j = 0; j < n; ++j)
        t[i * n + j] += i128(U[i][k]) * a.at(k, j).re;
    }
  // check (t * U^T)[i][j] == b[i][j]
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      i128 acc = 0;
      for (std::size_t k = 0; k < n; ++k) acc += t[i * n + k] * U[j][k];
      if (acc != i128(b.at(i, j).re)) return false;
    }
  return true;
}

std::int64_t int_determinant(const IntMatrix& m) {
  const std::size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw std::invalid_argument("determinant of non-square matrix");
  std::vector<G128> g(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g[i * n + j] = {m[i][j], 0};
  GaussianInt d = bareiss_det(std::move(g), n);
  return d.re;
}

int gf2_nullity(const LabeledSymMatrix& m) {
  if (!m.is_real())
    throw std::invalid_argument("GF(2) nullity requires an integer matrix");
  const std::size_t n = m.size();
  const std::size_t words = (n + 63) / 64;
  std::vector<std::vector<std::uint64_t>> rows(n, std::vector<std::uint64_t>(words, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (m.at(i, j).re & 1) rows[i][j / 64] ^= (std::uint64_t(1) << (j % 64));
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < n; ++col) {
    std::size_t w = col / 64;
    std::uint64_t bit = std::uint64_t(1) << (col % 64);
    std::size_t pivot = rank;
    while (pivot < n && !(rows[pivot][w] & bit)) ++pivot;
    if (pivot == n) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t i = 0; i < n; ++i)
      if (i != rank && (rows[i][w] & bit))
        for (std::size_t t = 0; t < words; ++t) rows[i][t] ^= rows[rank][t];
    ++rank;
  }
  return static_cast<int>(n - rank);
}

GaussianInt determinant(const LabeledSymMatrix& m) {
  const std::size_t n = m.size();
  std::vector<G128> g(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      g[i * n + j] = {m.at(i, j).re, m.at(i, j).im};
  return bareiss_det(std::move(g), n);
}

GaussianInt reduced_determinant(const LabeledSymMatrix& m) {
  if (m.size() == 0)
    throw std::invalid_argument("reduced determinant of an empty matrix");
  return determinant(m.reduce_first());
}

std::string LabeledSymMatrix::to_text() const {
  const std::size_t n = size();
  std::vector<std::vector<std::string>> cells(n + 1, std::vector<std::string>(n + 1));
  cells[0][0] = "";
  for (std::size_t j = 0; j < n; ++j) cells[0][j + 1] = labels_[j];
  for (std::size_t i = 0; i < n; ++i) {
    cells[i + 1][0] = labels_[i];
    for (std::size_t j = 0; j < n; ++j) cells[i + 1][j + 1] = at(i, j).str();
  }
  std::vector<std::size_t> width(n + 1, 0);
  for (auto& row : cells)
    for (std::size_t j = 0; j <= n; ++j) width[j] = std::max(width[j], row[j].size());
  std::ostringstream os;
  for (auto& row : cells) {
    for (std::size_t j = 0; j <= n; ++j) {
      if (j) os << "  ";
      os << std::string(width[j] - row[j].size(), ' ') << row[j];
    }
    os << "\n";
  }
  return os.str();
}

std::string LabeledSymMatrix::to_json() const {
  nlohmann::json j;
  j["labels"] = labels_;
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t k = 0; k < size(); ++k) {
      GaussianInt v = at(i, k);
      if (v.is_real())
        row.push_back(v.re);
      else
        row.push_back(v.str());
    }
    rows.push_back(std::move(row));
  }
  j["entries"] = std::move(rows);
  return j.dump(2);
}

LabeledSymMatrix LabeledSymMatrix::from_json(const std::string& text) {
  auto j = parse_json(text);
  if (!j.contains("labels") || !j.contains("entries"))
    throw std::invalid_argument("matrix JSON needs 'labels' and 'entries'");
  std::vector<std::string> labels = j["labels"].get<std::vector<std::string>>();
  LabeledSymMatrix out(labels);
  // Entries are given in the order of the 'labels' array, which need not be
  // sorted; map positions through the label names.
  const auto& given = j["labels"];
  const auto& entries = j["entries"];
  if (entries.size() != labels.size())
    throw std::invalid_argument("matrix JSON: row count != label count");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].size() != labels.size())
      throw std::invalid_argument("matrix JSON: ragged rows");
    for (std::size_t k = 0; k < entries[i].size(); ++k) {
      const auto& cell = entries[i][k];
      GaussianInt v;
      if (cell.is_number_integer())
        v = GaussianInt{cell.get<std::int64_t>()};
      else if (cell.is_string())
        v = GaussianInt::parse(cell.get<std::string>());
      else
        throw std::invalid_argument("matrix JSON: entries must be ints or strings");
      std::string ri = given[i].get<std::string>();
      std::string ci = given[k].get<std::string>();
      GaussianInt prev = out.at(ri, ci);
      if (!prev.is_zero() && prev != v)
        throw std::invalid_argument("matrix JSON: asymmetric entries");
      out.set(ri, ci, v);
    }
  }
  return out;
}

IntMatrix int_matrix_from_json(const std::string& text) {
  auto j = parse_json(text);
  if (!j.contains("rows"))
    throw std::invalid_argument("integer matrix JSON needs 'rows'");
  IntMatrix out;
  for (const auto& row : j["rows"]) {
    std::vector<std::int64_t> r;
    for (const auto& cell : row) {
      if (!cell.is_number_integer())
        throw std::invalid_argument("integer matrix JSON: non-integer entry");
      r.push_back(cell.get<std::int64_t>());
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace goeritz
