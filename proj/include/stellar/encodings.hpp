//
// stellar - Copyright 2026 The stellar authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef STELLAR_ENCODINGS_HPP
#define STELLAR_ENCODINGS_HPP

#include "stellar/engine.hpp"

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stellar::enc {

class EncodingError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// --- hypergraphs -----------------------------------------------------------

struct HyperEdge {
  std::string name;
  std::vector<std::string> sources;
  std::vector<std::string> targets;
};

struct Hypergraph {
  std::vector<std::string> vertices;
  std::vector<HyperEdge> edges;
};

/// Edge e with sources v1..vn and targets w1..wm becomes
/// [-v1(x), ..., -vn(x), +w1(e(x)), ..., +wm(e(x))]. Vertices are the colours.
Constellation encode_hypergraph(const Hypergraph& g);
ColourSet hypergraph_colours(const Hypergraph& g);

/// Lines `name: v1 v2 -> w1 w2`; `vertices a b c` declares isolated ones.
Hypergraph parse_hypergraph(std::string_view src);

// --- clauses ---------------------------------------------------------------

struct Literal {
  bool negated = false;
  Term atom;  // predicate applied to arguments
};

using Clause = std::vector<Literal>;

struct ClauseSet {
  std::vector<Clause> clauses;
};

/// Predicate symbols and their arities; throws EncodingError on a mismatch.
std::map<std::string, std::size_t> predicates(const ClauseSet& cs);

/// P(t) -> +P(t), not P(t) -> -P(t); one star per clause; `query` appended as is.
Constellation encode_clauses(const ClauseSet& cs, const std::optional<Star>& query = std::nullopt);

/// [-g1, ..., -gk, ans(X1, ..., Xn)] over the variables of the goals in order
/// of first occurrence; `ans` is a constant when the goals are ground.
Star query_star(const std::vector<Term>& goals);

struct ClauseProgram {
  ClauseSet clauses;
  std::optional<Star> query;
  std::vector<Term> goals;
};

/// `h1 ; h2 :- b1, b2.` is the clause {h1, h2, not b1, not b2}; `:- b.` and
/// `p(a).` are the degenerate forms; `?- g1, g2.` sets the query (at most one).
ClauseProgram parse_clauses(std::string_view src);

/// The `ans` rays of output stars without polarised rays, as canonical text.
std::vector<std::string> answers(const Constellation& output);

// --- flows -----------------------------------------------------------------

struct Flow {
  Term t;
  Term u;
};

using Wiring = std::vector<Flow>;

/// t <- u becomes [+t, -u]; the head symbols act as colours.
Constellation encode_wiring(const Wiring& w);
ColourSet wiring_colours(const Wiring& w);

// --- Wang tiles ------------------------------------------------------------

struct WangTile {
  std::string w, e, s, n;
  friend bool operator==(const WangTile&, const WangTile&) = default;
};

struct WangTileSet {
  std::vector<WangTile> tiles;
};

/// Slots of an encoded tile.
enum WangSlot { west = 0, south = 1, east = 2, north = 3 };

/// By default the east and north rays carry the neighbour's coordinates,
/// +h(c_e(s(x)), s(x), y) and +v(c_n(s(y)), x, s(y)). With `verbatim` they
/// keep (x, y), under which no two tiles ever connect.
Constellation encode_wang(const WangTileSet& ts, bool verbatim = false);
inline ColourSet wang_colours() { return {"h", "v"}; }

struct TileFile {
  WangTileSet tiles;
  std::map<std::string, int> strength;  // only from lines that give strengths
  std::optional<int> temperature;
};

/// `W E S N [sw se ss sn]` per line, `temperature t` once.
TileFile parse_tiles(std::string_view src);

/// Grid of tile indices, row-major from (0, 0) upward.
using Tiling = std::vector<std::vector<int>>;

struct RectangleSpec {
  int width = 1;
  int height = 1;
  std::optional<std::string> west_border;   // west colour of column 0
  std::optional<std::string> south_border;  // south colour of row 0
  std::optional<std::string> east_border;   // east colour of the last column
  std::size_t limit = 16;                   // stop after this many tilings
};

/// Backtracking placement over the encoding: a tile is placed when its west
/// and south rays unify with the neighbours' east and north rays.
std::vector<Tiling> tile_rectangle(const WangTileSet& ts, const RectangleSpec& spec, bool verbatim = false);

struct Placement {
  int x = 0, y = 0;
  int tile = 0;
  friend bool operator==(const Placement&, const Placement&) = default;
  friend auto operator<=>(const Placement&, const Placement&) = default;
};

/// Cells of a diagram over encode_wang read from its resolved coordinate
/// terms s^k(x), shifted so the minima are 0; sorted. Throws EncodingError
/// when a coordinate is not of that shape.
std::vector<Placement> wang_positions(const DiagramView& d);

/// The diagram of a rectangle tiling over encode_wang(ts) (one vertex per
/// cell, row-major).
Diagram tiling_diagram(const Tiling& t);

// --- Turing machines -------------------------------------------------------

enum class Move { left, right };

struct Transition {
  std::string next;
  std::string write;
  Move move = Move::right;
};

/// Single right-infinite tape; moving left on cell 0 stays there. A missing
/// transition halts.
struct TuringMachine {
  std::string start = "q0";
  std::string blank = "b";
  std::map<std::pair<std::string, std::string>, Transition> delta;
};

/// `start q`, `blank b`, `input a b c`, and `q a -> q' b' L|R` lines.
/// Names are alphanumeric.
struct TuringFile {
  TuringMachine machine;
  std::vector<std::string> input;
};
TuringFile parse_turing(std::string_view src);

struct Configuration {
  std::string state;
  std::size_t head = 0;
  std::vector<std::string> tape;  // grows on demand
  bool halted = false;
};

/// Reference run, `steps` transitions at most.
std::vector<Configuration> run_turing(const TuringMachine& tm, const std::vector<std::string>& input, int steps);

/// Space-time tiles: row t is configuration t, the bottom row spells the
/// input. Column 0 has west colour "edge", row 0 south colour "bot". Names
/// follow tm_cell_colour and are valid symbols.
WangTileSet compile_turing(const TuringMachine& tm, const std::vector<std::string>& input);
inline const char* tm_edge_colour() { return "edge"; }
inline const char* tm_bottom_colour() { return "bot"; }
std::string tm_cell_colour(const std::optional<std::string>& state, const std::string& symbol);

struct TapeCell {
  std::optional<std::string> state;
  std::string symbol;
  friend bool operator==(const TapeCell&, const TapeCell&) = default;
};
std::optional<TapeCell> decode_tm_colour(const std::string& colour);

/// Rows of the unique space-time tiling of height steps + 1, or fewer rows
/// when the run halts. Throws EncodingError when a row admits no or several
/// tilings.
std::vector<std::vector<TapeCell>> simulate_by_tiling(const TuringMachine& tm, const std::vector<std::string>& input,
                                                      int steps, int width, bool verbatim = false);

// --- aTAM ------------------------------------------------------------------

struct ATAMSystem {
  WangTileSet tiles;  // glue types in place of colours
  std::map<std::string, int> strength;
  int temperature = 1;
};

/// Colour names for h-, h+, v- and v+.
inline const char* hm() { return "hm"; }
inline const char* hp() { return "hp"; }
inline const char* vm() { return "vm"; }
inline const char* vp() { return "vp"; }
inline ColourSet atam_colours() { return {"hm", "hp", "vm", "vp"}; }

/// gl(g(x), s^str(g)(0)); the glue symbol is written `gl` so that the text
/// format does not read it as a variable.
Term glue(const std::string& g, int strength, const Term& x);

/// [-hp(gl(w)(x), x, y), -vp(gl(s)(y), x, y), +hm(gl(e)(s(x)), x, y), +vm(gl(n)(s(y)), x, y)]
Star atam_tile_star(const ATAMSystem& sys, const WangTile& t);

/// Ambiance star A^{a,b,c,d}: intakes 0..3 then handovers 4..7, normalised to
/// ternary colours.
Star ambiance_star(int a, int b, int c, int d);

/// Plug stars. Corrected: [-vp], [+vm], [-hp], [+hm] over ternary rays.
/// Verbatim: [-vp(x)], [+vm(x)], [-hp(x)], [+vm(x)] as printed.
std::vector<Star> plug_stars(bool verbatim);

struct ATAMEncoding {
  Constellation constellation;
  std::size_t first_tile = 0;  // index of the first tile star
  std::size_t first_ambiance = 0;
  std::size_t first_plug = 0;
  std::vector<std::array<int, 4>> ambiances;  // (a, b, c, d) per ambiance star
};

/// Ambiances for a + b + c + d = t, then tiles, then plugs. Throws
/// EncodingError for t < 1, negative strengths or missing glue strengths.
ATAMEncoding encode_atam(const ATAMSystem& sys, bool verbatim = false);

/// An assembly grown on the encoding. Every attached tile brings one
/// ambiance star whose intakes hold its sides and whose handovers hold the
/// facing sides of the neighbours it binds to.
class Assembly {
public:
  Assembly(const ATAMSystem& sys, const ATAMEncoding& enc, Placement seed);

  /// Attaches when some ambiance binds the new tile on every side with a
  /// positive requirement and the diagram stays solvable.
  bool try_attach(Placement p);
  bool can_attach(Placement p) const;
  const std::vector<Placement>& placements() const { return placed_; }
  const Diagram& diagram() const { return diagram_; }

private:
  struct Attachment {
    Diagram diagram;
    IncrementalUnifier unifier;
  };
  std::optional<Attachment> attach(Placement p) const;

  const ATAMSystem* sys_;
  const ATAMEncoding* enc_;
  std::vector<Placement> placed_;
  std::vector<int> vertex_of_;  // tile vertex per placement
  Diagram diagram_;
  IncrementalUnifier unifier_;
};

/// Standard attachment rule: matching glues of present neighbours sum to at
/// least the temperature.
bool atam_rule(const ATAMSystem& sys, const std::vector<Placement>& assembly, Placement p);

}  // namespace stellar::enc

#endif
