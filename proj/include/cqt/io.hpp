#pragma once

#include "cqt/homred.hpp"

#include <fstream>
#include <json.hpp>

namespace cqt {

using json = nlohmann::json;

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw Error(Errc::ParseError, "complex value must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

// ---- surfaces and mapping classes -------------------------------------------------------

struct SurfaceLibrary {
  std::map<std::string, DottedTriangulation> surfaces;
  std::map<std::string, MappingClassSpec> mapclasses;
};

namespace detail {

inline std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> t;
  std::istringstream is(line);
  std::string w;
  while (is >> w) {
    if (w[0] == '#') break;
    t.push_back(w);
  }
  return t;
}

inline int to_int(const std::string& s, int line) {
  try {
    std::size_t n = 0;
    int v = std::stoi(s, &n);
    if (n == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(Errc::ParseError, "line " + std::to_string(line) + ": expected an integer, got '" + s + "'");
}

}  // namespace detail

inline Move parse_move(const std::vector<std::string>& t, int line) {
  auto need = [&](std::size_t n) {
    if (t.size() != n) throw Error(Errc::ParseError, "line " + std::to_string(line) + ": malformed move");
  };
  if (t[0] == "flip") {
    need(3);
    return Move::flip(detail::to_int(t[1], line), detail::to_int(t[2], line));
  }
  if (t[0] == "rot") {
    if (t.size() != 2 && t.size() != 3) need(2);
    return Move::rot(detail::to_int(t[1], line), t.size() == 3 ? detail::to_int(t[2], line) : 1);
  }
  if (t[0] == "swap") {
    need(3);
    return Move::swap(detail::to_int(t[1], line), detail::to_int(t[2], line));
  }
  if (t[0] == "perm") {
    Move m;
    m.type = MoveType::Permute;
    for (std::size_t i = 1; i < t.size(); ++i) {
      auto c = t[i].find(':');
      if (c == std::string::npos) throw Error(Errc::ParseError, "line " + std::to_string(line) + ": perm wants a:b");
      m.perm[detail::to_int(t[i].substr(0, c), line)] = detail::to_int(t[i].substr(c + 1), line);
    }
    return m;
  }
  throw Error(Errc::ParseError, "line " + std::to_string(line) + ": unknown move '" + t[0] + "'");
}

inline SurfaceLibrary parse_surfaces(std::istream& in) {
  SurfaceLibrary lib;
  std::string raw;
  int line = 0;
  enum { None, InSurface, InMapclass } state = None;
  std::string name, on;
  std::vector<Triangle> tris;
  std::set<int> boundary;
  std::vector<Move> moves;
  auto fail = [&](const std::string& msg) {
    throw Error(Errc::ParseError, "line " + std::to_string(line) + ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++line;
    auto t = detail::tokens(raw);
    if (t.empty()) continue;
    if (state == None) {
      if (t[0] == "surface" && t.size() == 2) {
        state = InSurface;
        name = t[1];
        tris.clear();
        boundary.clear();
      } else if (t[0] == "mapclass" && t.size() == 4 && t[2] == "on") {
        state = InMapclass;
        name = t[1];
        on = t[3];
        moves.clear();
      } else {
        fail("expected 'surface NAME' or 'mapclass NAME on SURFACE'");
      }
      continue;
    }
    if (t[0] == "end") {
      if (state == InSurface) {
        lib.surfaces[name] = make_triangulation(name, tris, boundary);
      } else {
        DottedTriangulation d;
        if (lib.surfaces.count(on)) d = lib.surfaces.at(on);
        else d = builtin_surface(on);
        lib.mapclasses[name] = close_sequence(name, d, moves);
      }
      state = None;
      continue;
    }
    if (state == InSurface) {
      if (t[0] == "tri") {
        // tri LABEL NAME S0 S1 S2 dot D
        if (t.size() != 8 || t[6] != "dot") fail("tri LABEL NAME S0 S1 S2 dot D");
        Triangle tr;
        tr.label = detail::to_int(t[1], line);
        tr.name = t[2];
        for (int i = 0; i < 3; ++i) tr.sides[i] = detail::to_int(t[3 + i], line);
        tr.dot = detail::to_int(t[7], line);
        if (tr.dot < 0 || tr.dot > 2) fail("dot must be 0, 1 or 2");
        tris.push_back(tr);
      } else if (t[0] == "boundary") {
        for (std::size_t i = 1; i < t.size(); ++i) boundary.insert(detail::to_int(t[i], line));
      } else {
        fail("unknown surface directive '" + t[0] + "'");
      }
    } else {
      moves.push_back(parse_move(t, line));
    }
  }
  if (state != None) throw Error(Errc::ParseError, "unterminated block '" + name + "'");
  return lib;
}

inline SurfaceLibrary load_surfaces(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(Errc::ParseError, "cannot open " + path);
  return parse_surfaces(f);
}

inline std::string dump_surface(const DottedTriangulation& d) {
  std::ostringstream os;
  os << "surface " << d.name << "\n";
  for (auto& t : d.tris)
    os << "  tri " << t.label << " " << (t.name.empty() ? "t" + std::to_string(t.label) : t.name) << " "
       << t.sides[0] << " " << t.sides[1] << " " << t.sides[2] << " dot " << t.dot << "\n";
  std::vector<int> b;
  for (auto& [e, isb] : d.edges)
    if (isb) b.push_back(e);
  if (!b.empty()) {
    os << "  boundary";
    for (int e : b) os << " " << e;
    os << "\n";
  }
  os << "end\n";
  return os.str();
}

// ---- coefficient tuples -----------------------------------------------------------------

inline json coefficients_to_json(const CoefficientTuple& t) {
  json j = json::object();
  for (auto& [e, p] : t) j[std::to_string(e)] = {p.pp.real(), p.pp.imag(), p.pm.real(), p.pm.imag()};
  return j;
}

inline CoefficientTuple coefficients_from_json(const RootData& rd, const json& in) {
  const json& j = in.contains("coeffs") ? in.at("coeffs") : in;
  if (!j.is_object()) throw Error(Errc::ParseError, "coefficient tuple must be an object");
  CoefficientTuple t;
  for (auto& [k, v] : j.items()) {
    if (!v.is_array() || v.size() != 4) throw Error(Errc::ParseError, "edge " + k + ": expected 4 numbers");
    FermatPoint p{{v[0].get<double>(), v[1].get<double>()}, {v[2].get<double>(), v[3].get<double>()}};
    if (fermat_residual(rd, p) > std::max(rd.tol, 1e-9))
      throw Error(Errc::ParseError, "edge " + k + ": point is off the Fermat curve");
    int e = 0;
    try {
      e = std::stoi(k);
    } catch (const std::exception&) {
      throw Error(Errc::ParseError, "edge id '" + k + "' is not an integer");
    }
    t[e] = p;
  }
  return t;
}

inline CoefficientTuple load_coefficients(const RootData& rd, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(Errc::ParseError, "cannot open " + path);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, e.what());
  }
  return coefficients_from_json(rd, j);
}

// ---- polarizations ----------------------------------------------------------------------

// A path given by the dual vertices (triangle labels) it visits and the edges it crosses,
// edges[i] being the edge through which vertices[i] is entered.
inline EdgePath path_from_lists(const DottedTriangulation& d, const std::vector<int>& verts,
                                const std::vector<int>& edges, bool closed = true) {
  std::size_t n = verts.size();
  if (n == 0 || (closed ? edges.size() != n : edges.size() != n + 1))
    throw Error(Errc::InvalidPath, "vertex and edge lists have incompatible lengths");
  auto sides_with = [&](int tri, int e) {
    std::vector<int> s;
    const Triangle& t = d.tri(tri);
    for (int i = 0; i < 3; ++i)
      if (t.sides[i] == e) s.push_back(i);
    if (s.empty()) throw Error(Errc::InvalidPath, "edge " + std::to_string(e) + " is not a side of " + std::to_string(tri));
    return s;
  };
  auto crossing = [&](std::size_t i) { return edges[(i + 1) % edges.size()]; };
  // exit side of step i, chosen so that its gluing lands on the next vertex
  std::vector<int> exit(n), entry(n);
  for (std::size_t i = 0; i < n; ++i) {
    int e = closed ? crossing(i) : edges[i + 1];
    auto cand = sides_with(verts[i], e);
    exit[i] = cand.front();
    if (closed || i + 1 < n) {
      int nxt = verts[(i + 1) % n];
      for (int s : cand) {
        auto g = d.glued({d.tri_index(verts[i]), s});
        if (g && d.tris[g->tri].label == nxt) {
          exit[i] = s;
          break;
        }
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto cand = sides_with(verts[i], edges[i]);
    entry[i] = cand.front();
    for (int s : cand) {
      bool ok = s != exit[i];
      if (ok && (closed || i > 0)) {
        std::size_t pi = (i + n - 1) % n;
        auto g = d.glued({d.tri_index(verts[pi]), exit[pi]});
        ok = g && d.tris[g->tri].label == verts[i] && g->side == s;
      }
      if (ok) {
        entry[i] = s;
        break;
      }
    }
  }
  EdgePath p;
  p.closed = closed;
  for (std::size_t i = 0; i < n; ++i) p.steps.push_back({verts[i], entry[i], exit[i]});
  validate_path(d, p);
  return p;
}

inline EdgePath path_from_json(const DottedTriangulation& d, const json& j) {
  if (j.contains("puncture")) return puncture_path(d, punctures(d).at(j.at("puncture").get<int>()));
  if (j.contains("boundary")) return boundary_path(d, j.at("boundary").get<int>());
  bool closed = j.value("closed", true);
  if (j.contains("steps")) {
    EdgePath p;
    p.closed = closed;
    for (auto& s : j.at("steps")) p.steps.push_back({s.at(0).get<int>(), s.at(1).get<int>(), s.at(2).get<int>()});
    validate_path(d, p);
    return p;
  }
  if (j.contains("vertices") && j.contains("edges"))
    return path_from_lists(d, j.at("vertices").get<std::vector<int>>(), j.at("edges").get<std::vector<int>>(), closed);
  throw Error(Errc::ParseError, "path needs 'steps', 'vertices'+'edges', 'puncture' or 'boundary'");
}

// {"classes": {name: path}, "lagrangian": [names], "peripheral": [names], "lambda": {name: int}}
inline PolarizationSpec polarization_from_json(const DottedTriangulation& d, const json& j) {
  PolarizationSpec s;
  try {
    const json& cls = j.at("classes");
    const json& lam = j.at("lambda");
    auto add = [&](const std::string& key, std::vector<EdgePath>& paths, std::vector<int>& ws) {
      if (!j.contains(key)) return;
      for (auto& n : j.at(key)) {
        auto nm = n.get<std::string>();
        if (!cls.contains(nm)) throw Error(Errc::ParseError, "unknown class '" + nm + "'");
        paths.push_back(path_from_json(d, cls.at(nm)));
        ws.push_back(lam.value(nm, 0));
      }
    };
    add("lagrangian", s.generators, s.weights);
    add("peripheral", s.peripheral, s.peripheral_weights);
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, e.what());
  }
  return s;
}

}  // namespace cqt
