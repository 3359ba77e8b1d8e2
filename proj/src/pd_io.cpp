#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>

#include "goeritz/diagram.hpp"
#include "json.hpp"
#include "skeleton.hpp"

namespace goeritz {
namespace {

struct NestDirective {
  std::string piece;
  std::string face;  // empty = least face name of the piece
  std::string host;
  std::string host_face;
};

QuadKey face_anchor(const detail::Skeleton& sk, int face) {
  return sk.faces.at(face).quads.front();  // quads are sorted
}

/// Default face of a piece in a nest directive: the least face name.
int default_face(const detail::Skeleton& sk, int piece) {
  const auto& faces = sk.pieces.at(piece).faces;
  int best = faces.front();
  for (int f : faces)
    if (sk.faces[f].name < sk.faces[best].name) best = f;
  return best;
}

Diagram build_from_parts(const std::vector<std::array<ArcId, 4>>& xs,
                         int ncircles,
                         const std::vector<NestDirective>& nests,
                         const std::optional<std::string>& outer_label) {
  Diagram d;
  for (std::size_t i = 0; i < xs.size(); ++i)
    d.crossings[static_cast<CrossingId>(i + 1)] = Crossing{xs[i]};
  for (int i = 1; i <= ncircles; ++i) d.circles.insert(i);

  detail::Skeleton sk = detail::trace_skeleton(d);
  for (const auto& n : nests) {
    int np = sk.piece_by_name(n.piece);
    int hp = sk.piece_by_name(n.host);
    int nf = n.face.empty() ? default_face(sk, np) : sk.face_by_name(np, n.face);
    int hf = sk.face_by_name(hp, n.host_face);
    d.merges.emplace_back(face_anchor(sk, nf), face_anchor(sk, hf));
  }
  if (outer_label) {
    DiagramAnalysis an(d);
    int r = an.region_by_label(*outer_label);
    QuadKey anchor = an.face(an.region(r).faces.front()).quads.front();
    for (int f : an.region(r).faces)
      anchor = std::min(anchor, an.face(f).quads.front());
    d.outer = anchor;
  }
  DiagramAnalysis validate(d);
  return d;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::array<ArcId, 4> parse_x_line(const std::string& line, int lineno) {
  auto open = line.find('(');
  auto close = line.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open ||
      trim(line.substr(close + 1)) != "")
    throw DiagramError("line " + std::to_string(lineno) +
                       ": malformed crossing, expected X(a,b,c,d)");
  std::string inner = line.substr(open + 1, close - open - 1);
  std::array<ArcId, 4> out{};
  std::istringstream is(inner);
  std::string tok;
  int k = 0;
  while (std::getline(is, tok, ',')) {
    tok = trim(tok);
    if (k >= 4 || tok.empty())
      throw DiagramError("line " + std::to_string(lineno) +
                         ": expected exactly four arc ids");
    std::size_t pos = 0;
    long v = 0;
    try {
      v = std::stol(tok, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != tok.size() || v <= 0 || v > INT32_MAX)
      throw DiagramError("line " + std::to_string(lineno) + ": bad arc id '" +
                         tok + "'");
    out[k++] = static_cast<ArcId>(v);
  }
  if (k != 4)
    throw DiagramError("line " + std::to_string(lineno) +
                       ": expected exactly four arc ids");
  return out;
}

/// Splits "piece:face" (face optional unless required).
std::pair<std::string, std::string> parse_piece_ref(const std::string& tok,
                                                    bool face_required,
                                                    int lineno) {
  auto colon = tok.find(':');
  if (colon == std::string::npos) {
    if (face_required)
      throw DiagramError("line " + std::to_string(lineno) + ": '" + tok +
                         "' must name a face, e.g. x1:{1,4}");
    return {tok, ""};
  }
  std::string piece = tok.substr(0, colon);
  std::string face = tok.substr(colon + 1);
  if (piece.empty() || face.empty())
    throw DiagramError("line " + std::to_string(lineno) +
                       ": malformed piece reference '" + tok + "'");
  return {piece, face};
}

Diagram parse_pd_text(const std::string& text) {
  std::vector<std::array<ArcId, 4>> xs;
  int ncircles = 0;
  std::vector<NestDirective> nests;
  std::optional<std::string> outer_label;

  std::istringstream is(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line[0] == 'X') {
      xs.push_back(parse_x_line(line, lineno));
      continue;
    }
    std::istringstream toks(line);
    std::string head;
    toks >> head;
    if (head == "O") {
      std::string rest;
      if (toks >> rest)
        throw DiagramError("line " + std::to_string(lineno) +
                           ": unexpected text after O");
      ++ncircles;
    } else if (head == "nest") {
      std::string a, kw, b, extra;
      if (!(toks >> a >> kw >> b) || kw != "in" || (toks >> extra))
        throw DiagramError("line " + std::to_string(lineno) +
                           ": expected 'nest <piece>[:<face>] in <piece>:<face>'");
      NestDirective n;
      std::tie(n.piece, n.face) = parse_piece_ref(a, false, lineno);
      std::tie(n.host, n.host_face) = parse_piece_ref(b, true, lineno);
      nests.push_back(std::move(n));
    } else if (head == "outer") {
      std::string label, extra;
      if (!(toks >> label) || (toks >> extra))
        throw DiagramError("line " + std::to_string(lineno) +
                           ": expected 'outer <region>'");
      if (outer_label)
        throw DiagramError("line " + std::to_string(lineno) +
                           ": duplicate outer directive");
      outer_label = label;
    } else {
      throw DiagramError("line " + std::to_string(lineno) +
                         ": unrecognized directive '" + head + "'");
    }
  }
  return build_from_parts(xs, ncircles, nests, outer_label);
}

Diagram parse_pd_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DiagramError(std::string("bad JSON: ") + e.what());
  }
  if (!j.is_object()) throw DiagramError("expected a JSON object");
  std::vector<std::array<ArcId, 4>> xs;
  if (j.contains("crossings")) {
    if (!j["crossings"].is_array())
      throw DiagramError("'crossings' must be an array of [a,b,c,d]");
    for (const auto& row : j["crossings"]) {
      if (!row.is_array() || row.size() != 4)
        throw DiagramError("'crossings' must be an array of [a,b,c,d]");
      std::array<ArcId, 4> x{};
      for (int k = 0; k < 4; ++k) {
        if (!row[k].is_number_integer() || row[k].get<long>() <= 0)
          throw DiagramError("arc ids must be positive integers");
        x[k] = row[k].get<ArcId>();
      }
      xs.push_back(x);
    }
  }
  int ncircles = 0;
  if (j.contains("circles")) {
    if (!j["circles"].is_number_integer() || j["circles"].get<int>() < 0)
      throw DiagramError("'circles' must be a non-negative count");
    ncircles = j["circles"].get<int>();
  }
  std::vector<NestDirective> nests;
  if (j.contains("nest")) {
    if (!j["nest"].is_array()) throw DiagramError("'nest' must be an array");
    for (const auto& e : j["nest"]) {
      if (!e.is_object() || !e.contains("piece") || !e.contains("in") ||
          !e.contains("at"))
        throw DiagramError("nest entries need 'piece', 'in' and 'at'");
      NestDirective n;
      n.piece = e["piece"].get<std::string>();
      if (e.contains("face")) n.face = e["face"].get<std::string>();
      n.host = e["in"].get<std::string>();
      n.host_face = e["at"].get<std::string>();
      nests.push_back(std::move(n));
    }
  }
  std::optional<std::string> outer_label;
  if (j.contains("outer")) {
    if (!j["outer"].is_string()) throw DiagramError("'outer' must be a region label");
    outer_label = j["outer"].get<std::string>();
  }
  return build_from_parts(xs, ncircles, nests, outer_label);
}

int piece_depth(const DiagramAnalysis& an, int p) {
  int depth = 0;
  for (;;) {
    ++depth;
    int r = an.parent_region(p);
    if (r == an.outer_region()) return depth;
    p = an.region_parent_piece(r);
  }
}

struct CanonicalParts {
  Diagram d;                       // renumbered + slot-canonical copy
  std::vector<std::string> nests;  // sorted "nest ..." payloads
  std::optional<std::string> outer_label;
};

CanonicalParts canonical_parts(const Diagram& d) {
  CanonicalParts out;
  Diagram d2 = d;
  canonicalize_slots(d2);
  std::map<CrossingId, CrossingId> cmap;
  std::map<CircleId, CircleId> omap;
  {
    CrossingId k = 1;
    for (const auto& [cid, cr] : d2.crossings) cmap[cid] = k++;
    CircleId m = 1;
    for (CircleId oid : d2.circles) omap[oid] = m++;
  }
  auto remap = [&](QuadKey q) {
    q.id = q.circle ? omap.at(q.id) : cmap.at(q.id);
    return q;
  };
  for (const auto& [cid, cr] : d2.crossings) out.d.crossings[cmap[cid]] = cr;
  for (CircleId oid : d2.circles) out.d.circles.insert(omap[oid]);
  for (const auto& m : d2.merges)
    out.d.merges.emplace_back(remap(m.first), remap(m.second));
  if (d2.outer) out.d.outer = remap(*d2.outer);

  DiagramAnalysis an(out.d);
  for (const auto& m : out.d.merges) {
    int fa = an.face_of_quad(m.first), fb = an.face_of_quad(m.second);
    int pa = an.face(fa).piece, pb = an.face(fb).piece;
    bool a_nested = std::make_pair(piece_depth(an, pa), pa) >
                    std::make_pair(piece_depth(an, pb), pb);
    int np = a_nested ? pa : pb, nf = a_nested ? fa : fb;
    int hp = a_nested ? pb : pa, hf = a_nested ? fb : fa;
    out.nests.push_back(an.piece(np).name + ":" + an.face(nf).name + " in " +
                        an.piece(hp).name + ":" + an.face(hf).name);
  }
  std::sort(out.nests.begin(), out.nests.end());
  if (an.outer_region() != 0)
    out.outer_label = an.region(an.outer_region()).label;
  return out;
}

}  // namespace

Diagram parse_pd(const std::string& text) {
  auto b = text.find_first_not_of(" \t\r\n");
  if (b != std::string::npos && text[b] == '{') return parse_pd_json(text);
  return parse_pd_text(text);
}

std::string to_pd_text(const Diagram& d) {
  CanonicalParts parts = canonical_parts(d);
  std::ostringstream os;
  for (const auto& [cid, cr] : parts.d.crossings)
    os << "X(" << cr.slots[0] << ',' << cr.slots[1] << ',' << cr.slots[2] << ','
       << cr.slots[3] << ")\n";
  for (std::size_t i = 0; i < parts.d.circles.size(); ++i) os << "O\n";
  for (const auto& n : parts.nests) os << "nest " << n << "\n";
  if (parts.outer_label) os << "outer " << *parts.outer_label << "\n";
  return os.str();
}

std::string to_pd_json(const Diagram& d) {
  CanonicalParts parts = canonical_parts(d);
  nlohmann::ordered_json j;
  j["crossings"] = nlohmann::json::array();
  for (const auto& [cid, cr] : parts.d.crossings)
    j["crossings"].push_back({cr.slots[0], cr.slots[1], cr.slots[2], cr.slots[3]});
  j["circles"] = static_cast<int>(parts.d.circles.size());
  j["nest"] = nlohmann::json::array();
  for (const auto& n : parts.nests) {
    // "x1:{1,4} in x2:{2,5}"
    auto in_pos = n.find(" in ");
    auto split = [](const std::string& s) {
      auto c = s.find(':');
      return std::pair<std::string, std::string>{s.substr(0, c), s.substr(c + 1)};
    };
    auto [np, nf] = split(n.substr(0, in_pos));
    auto [hp, hf] = split(n.substr(in_pos + 4));
    j["nest"].push_back({{"piece", np}, {"face", nf}, {"in", hp}, {"at", hf}});
  }
  if (parts.outer_label) j["outer"] = *parts.outer_label;
  return j.dump(2) + "\n";
}

bool diagram_equal(const Diagram& a, const Diagram& b) {
  return to_pd_text(a) == to_pd_text(b);
}

}  // namespace goeritz
