#include "wickgen/scheme.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace wickgen {

OutputSignature OutputSignature::for_component(const ModelSpec& m, const MultiIndex& Q) {
    if (static_cast<int>(Q.entries.size()) != m.multiplet.size())
        throw std::invalid_argument("component multi-index length mismatch");
    OutputSignature sig;
    int next = 0;
    for (std::size_t i = 0; i < Q.entries.size(); ++i) {
        const int k = m.multiplet.entries[i].rank;
        const long q = Q.entries[i];
        if (q == 0 || k == 0) continue;
        Run run;
        for (long c = 0; c < q; ++c) {
            std::vector<int> block;
            for (int s = 0; s < k; ++s) block.push_back(next++);
            run.blocks.push_back(std::move(block));
        }
        sig.runs.push_back(std::move(run));
    }
    sig.rank = next;
    return sig;
}

OutputSignature OutputSignature::plain(int rank) {
    OutputSignature sig;
    sig.rank = rank;
    return sig;
}

OutputSignature OutputSignature::symmetric(int rank) {
    OutputSignature sig;
    sig.rank = rank;
    if (rank > 0) {
        Run run;
        for (int s = 0; s < rank; ++s) run.blocks.push_back({s});
        sig.runs.push_back(std::move(run));
    }
    return sig;
}

std::string OutputSignature::key() const {
    std::ostringstream os;
    os << "R" << rank;
    for (const auto& run : runs) {
        os << "[";
        for (const auto& b : run.blocks) os << b.size() << ",";
        os << "]";
    }
    return os.str();
}

namespace {

// A port is a maximal set of mutually interchangeable slots: a totally
// symmetric group of one block instance, the epsilon slot set, one
// single-slot-block output run, or a single output slot.
struct PortInfo {
    int vclass;    // >= 0 block class; -2 epsilon; -1 output; <= -1000 output run blocks
    int instance;  // identical-block copy (or output block within a run)
    int group;     // symmetric group id within the vertex
    bool antisym = false;
    std::vector<int> slots;
};

struct PortTable {
    std::vector<PortInfo> ports;
    // instance permutation classes: identical blocks, output blocks in a run
    struct PermClass {
        int vclass;
        std::vector<int> instances;
    };
    std::vector<PermClass> classes;
    // value-preserving group swaps: class vclass may swap group g1 <-> g2 per
    // instance independently
    struct GroupSwap {
        int vclass, g1, g2;
    };
    std::vector<GroupSwap> swaps;
    std::vector<std::pair<int, int>> instances_with_swaps;  // (vclass, instance)

    int block_slots = 0;
    int eps_slots = 0;
    int out_rank = 0;
};

PortTable build_ports(const Monomial& mono, const OutputSignature& out, bool epsilon, int dim) {
    PortTable pt;
    auto blocks = mono.all_blocks();
    std::map<std::string, int> class_ids;
    std::map<std::string, int> instance_count;
    std::map<int, std::vector<int>> class_instances;
    std::map<int, std::pair<int, int>> class_swap;  // vclass -> group pair

    int slot = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const auto& bd = blocks[b];
        auto [it, fresh] = class_ids.try_emplace(bd.key(), static_cast<int>(class_ids.size()));
        int vclass = it->second;
        int inst = instance_count[bd.key()]++;
        class_instances[vclass].push_back(inst);

        std::vector<int> group_of(static_cast<std::size_t>(bd.rank), -1);
        int gid = 0;
        for (const auto& g : bd.symmetry.groups) {
            for (int s : g) group_of[static_cast<std::size_t>(s)] = gid;
            ++gid;
        }
        std::map<int, PortInfo> local;  // group -> port
        for (int s = 0; s < bd.rank; ++s) {
            int g = group_of[static_cast<std::size_t>(s)];
            if (g < 0) g = gid + s;  // singleton
            auto [lit, linserted] = local.try_emplace(g, PortInfo{vclass, inst, g, false, {}});
            lit->second.slots.push_back(slot++);
        }
        for (auto& [g, port] : local) pt.ports.push_back(std::move(port));

        for (const auto& [ga, gb] : bd.symmetry.exchanges) {
            auto group_id_of = [&](const std::vector<int>& set) {
                std::vector<int> sorted = set;
                std::sort(sorted.begin(), sorted.end());
                int id = 0;
                for (const auto& g : bd.symmetry.groups) {
                    std::vector<int> gs = g;
                    std::sort(gs.begin(), gs.end());
                    if (gs == sorted) return id;
                    ++id;
                }
                return -1;
            };
            int i1 = group_id_of(ga), i2 = group_id_of(gb);
            if (i1 >= 0 && i2 >= 0 && i1 != i2) {
                class_swap[vclass] = {std::min(i1, i2), std::max(i1, i2)};
                pt.instances_with_swaps.push_back({vclass, inst});
            }
        }
    }
    pt.block_slots = slot;

    if (epsilon) {
        PortInfo eps{-2, 0, 0, true, {}};
        for (int s = 0; s < dim; ++s) eps.slots.push_back(slot++);
        pt.eps_slots = dim;
        pt.ports.push_back(std::move(eps));
    }

    pt.out_rank = out.rank;
    std::vector<int> out_port_of(static_cast<std::size_t>(out.rank), -1);
    int run_id = 0;
    for (const auto& run : out.runs) {
        bool single = true;
        for (const auto& blk : run.blocks) single = single && blk.size() == 1;
        if (single) {
            PortInfo p{-1, 0, run_id, false, {}};
            for (const auto& blk : run.blocks) {
                p.slots.push_back(slot + blk[0]);
                out_port_of[static_cast<std::size_t>(blk[0])] = 0;
            }
            pt.ports.push_back(std::move(p));
        } else {
            int vclass = -1000 - run_id;
            int inst = 0;
            std::vector<int> insts;
            for (const auto& blk : run.blocks) {
                for (std::size_t pos = 0; pos < blk.size(); ++pos) {
                    PortInfo p{vclass, inst, static_cast<int>(pos), false,
                               {slot + blk[pos]}};
                    out_port_of[static_cast<std::size_t>(blk[pos])] = 0;
                    pt.ports.push_back(std::move(p));
                }
                insts.push_back(inst++);
            }
            class_instances[vclass] = insts;
        }
        ++run_id;
    }
    for (int r = 0; r < out.rank; ++r) {
        if (out_port_of[static_cast<std::size_t>(r)] >= 0) continue;
        PortInfo p{-1, 0, 1000 + r, false, {slot + r}};
        pt.ports.push_back(std::move(p));
    }

    for (auto& [vc, insts] : class_instances) {
        std::sort(insts.begin(), insts.end());
        if (insts.size() >= 2) pt.classes.push_back({vc, insts});
    }
    for (auto& [vc, pair] : class_swap) pt.swaps.push_back({vc, pair.first, pair.second});
    return pt;
}

// unit-edge multigraphs on ports, each generated exactly once
using EdgeUnits = std::vector<std::pair<int, int>>;  // port index pairs, a <= b

void enumerate_multigraphs(const PortTable& pt, const std::function<void(const EdgeUnits&)>& emit) {
    const std::size_t P = pt.ports.size();
    std::vector<int> remaining(P);
    for (std::size_t p = 0; p < P; ++p)
        remaining[p] = static_cast<int>(pt.ports[p].slots.size());
    EdgeUnits edges;
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t p, std::size_t min_q) {
        while (p < P && remaining[p] == 0) {
            ++p;
            min_q = p;
        }
        if (p == P) {
            emit(edges);
            return;
        }
        for (std::size_t q = std::max(p, min_q); q < P; ++q) {
            if (q == p) {
                if (remaining[p] < 2) continue;
                if (pt.ports[p].antisym) continue;  // antisymmetric self-trace vanishes
            } else if (remaining[q] == 0) {
                continue;
            }
            // an antisymmetric port may meet a multi-slot symmetric port at
            // most once
            if (q != p && (pt.ports[p].antisym || pt.ports[q].antisym)) {
                const PortInfo& sym_port = pt.ports[pt.ports[p].antisym ? q : p];
                if (sym_port.slots.size() >= 2 && !edges.empty() &&
                    edges.back() == std::make_pair(static_cast<int>(p), static_cast<int>(q)))
                    continue;
            }
            remaining[p] -= 1;
            remaining[q] -= (q == p) ? 1 : 0;
            if (q != p) remaining[q] -= 1;
            edges.push_back({static_cast<int>(p), static_cast<int>(q)});
            rec(p, q);
            edges.pop_back();
            remaining[p] += 1;
            if (q != p)
                remaining[q] += 1;
            else
                remaining[p] += 1;
        }
    };
    rec(0, 0);
}

// canonical form under instance permutations and group swaps, as a sorted
// vector of packed endpoint codes
using PackedEdges = std::vector<std::uint64_t>;

struct Canonicalizer {
    const PortTable& pt;
    // port -> (ordinal pieces)
    std::vector<int> vclass_ord;  // per port: ordinal of vclass (order-preserving)
    std::map<int, int> vclass_map;

    explicit Canonicalizer(const PortTable& table) : pt(table) {
        std::set<int> vcs;
        for (const auto& p : pt.ports) vcs.insert(p.vclass);
        int ord = 0;
        for (int vc : vcs) vclass_map[vc] = ord++;
        vclass_ord.reserve(pt.ports.size());
        for (const auto& p : pt.ports) vclass_ord.push_back(vclass_map[p.vclass]);
    }

    std::uint64_t code(std::size_t port, const std::map<std::pair<int, int>, int>& inst_relabel,
                       const std::set<std::pair<int, int>>& active_swaps) const {
        const PortInfo& p = pt.ports[port];
        int inst = p.instance;
        auto it = inst_relabel.find({p.vclass, p.instance});
        if (it != inst_relabel.end()) inst = it->second;
        int group = p.group;
        if (!active_swaps.empty() && active_swaps.count({p.vclass, inst})) {
            for (const auto& sw : pt.swaps)
                if (sw.vclass == p.vclass) {
                    if (group == sw.g1)
                        group = sw.g2;
                    else if (group == sw.g2)
                        group = sw.g1;
                    break;
                }
        }
        return (static_cast<std::uint64_t>(vclass_ord[port]) << 24) |
               (static_cast<std::uint64_t>(inst) << 12) | static_cast<std::uint64_t>(group);
    }

    PackedEdges pack(const EdgeUnits& edges, const std::map<std::pair<int, int>, int>& relabel,
                     const std::set<std::pair<int, int>>& swaps) const {
        PackedEdges out;
        out.reserve(edges.size());
        for (auto [a, b] : edges) {
            std::uint64_t ca = code(static_cast<std::size_t>(a), relabel, swaps);
            std::uint64_t cb = code(static_cast<std::size_t>(b), relabel, swaps);
            if (cb < ca) std::swap(ca, cb);
            out.push_back((ca << 32) | cb);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    PackedEdges canonical(const EdgeUnits& edges) const {
        // iterate instance permutations per class x swap subsets
        std::vector<std::vector<std::vector<int>>> perms;
        std::size_t total = 1;
        for (const auto& cls : pt.classes) {
            std::vector<std::vector<int>> ps;
            std::vector<int> base(cls.instances.size());
            std::iota(base.begin(), base.end(), 0);
            do {
                ps.push_back(base);
            } while (std::next_permutation(base.begin(), base.end()));
            total *= ps.size();
            perms.push_back(std::move(ps));
        }
        const std::size_t swap_count = pt.instances_with_swaps.size();
        if (total > 4000 || swap_count > 10) return pack(edges, {}, {});

        PackedEdges best;
        std::vector<std::size_t> pick(perms.size(), 0);
        for (;;) {
            std::map<std::pair<int, int>, int> relabel;
            for (std::size_t c = 0; c < perms.size(); ++c) {
                const auto& insts = pt.classes[c].instances;
                const auto& perm = perms[c][pick[c]];
                for (std::size_t i = 0; i < insts.size(); ++i)
                    relabel[{pt.classes[c].vclass, insts[i]}] =
                        insts[static_cast<std::size_t>(perm[i])];
            }
            for (std::size_t mask = 0; mask < (1ull << swap_count); ++mask) {
                std::set<std::pair<int, int>> active;
                for (std::size_t s = 0; s < swap_count; ++s)
                    if (mask & (1ull << s)) active.insert(pt.instances_with_swaps[s]);
                PackedEdges k = pack(edges, relabel, active);
                if (best.empty() || k < best) best = std::move(k);
            }
            std::size_t c = 0;
            while (c < pick.size()) {
                if (++pick[c] < perms[c].size()) break;
                pick[c] = 0;
                ++c;
            }
            if (pick.empty() || c == pick.size()) break;
        }
        if (best.empty()) best = pack(edges, {}, {});
        return best;
    }
};

std::string packed_key(const PackedEdges& edges) {
    std::ostringstream os;
    os << std::hex;
    for (std::uint64_t e : edges) os << e << ".";
    return os.str();
}

// deterministic slot-level matching from a unit-edge multigraph
std::vector<std::pair<int, int>> realize(const PortTable& pt, const EdgeUnits& edges) {
    std::vector<std::size_t> next(pt.ports.size(), 0);
    auto take = [&](int port) {
        const PortInfo& p = pt.ports[static_cast<std::size_t>(port)];
        return p.slots[next[static_cast<std::size_t>(port)]++];
    };
    EdgeUnits sorted = edges;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::pair<int, int>> pairs;
    for (auto [a, b] : sorted) {
        int s1 = take(a);
        int s2 = take(b);
        if (s2 < s1) std::swap(s1, s2);
        pairs.push_back({s1, s2});
    }
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

// zero by symmetry: the antisymmetric epsilon port pairing twice into one
// fully symmetric port (or into itself, which the generator already blocks)
bool vanishes(const PortTable& pt, const EdgeUnits& edges) {
    std::map<std::pair<int, int>, int> count;
    for (auto [a, b] : edges) {
        if (a == b) {
            if (pt.ports[static_cast<std::size_t>(a)].antisym) return true;
            continue;
        }
        bool aa = pt.ports[static_cast<std::size_t>(a)].antisym;
        bool ab = pt.ports[static_cast<std::size_t>(b)].antisym;
        if (aa == ab) continue;
        const PortInfo& sym = pt.ports[static_cast<std::size_t>(aa ? b : a)];
        if (sym.slots.size() >= 2 && ++count[{a, b}] >= 2) return true;
    }
    return false;
}

}  // namespace

int Term::block_slot_count() const {
    int n = 0;
    for (const auto& b : monomial.all_blocks()) n += b.rank;
    return n;
}

int Term::total_slots() const { return static_cast<int>(pairs.size()) * 2; }

namespace {

struct TermGraph {
    int nvert = 0;  // block + epsilon vertices
    std::vector<int> root;
    std::vector<bool> touches_output;
};

TermGraph term_graph(const Term& t) {
    auto blocks = t.monomial.all_blocks();
    TermGraph g;
    g.nvert = static_cast<int>(blocks.size()) + (t.epsilon ? 1 : 0);
    std::vector<int> parent(static_cast<std::size_t>(std::max(g.nvert, 1)));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x)
            x = parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        return x;
    };

    // slot -> vertex (-1 for output slots)
    std::vector<int> vert;
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (int s = 0; s < blocks[b].rank; ++s) vert.push_back(static_cast<int>(b));
    if (t.epsilon) {
        int eps_count = t.total_slots() - t.block_slot_count() - t.out.rank;
        for (int s = 0; s < eps_count; ++s) vert.push_back(static_cast<int>(blocks.size()));
    }
    while (static_cast<int>(vert.size()) < t.total_slots()) vert.push_back(-1);

    std::vector<bool> touches(static_cast<std::size_t>(std::max(g.nvert, 1)), false);
    for (auto [a, b] : t.pairs) {
        int va = vert[static_cast<std::size_t>(a)], vb = vert[static_cast<std::size_t>(b)];
        if (va >= 0 && vb >= 0)
            parent[static_cast<std::size_t>(find(va))] = find(vb);
        else if (va >= 0)
            touches[static_cast<std::size_t>(va)] = true;
        else if (vb >= 0)
            touches[static_cast<std::size_t>(vb)] = true;
    }
    g.root.resize(static_cast<std::size_t>(g.nvert));
    g.touches_output.assign(static_cast<std::size_t>(std::max(g.nvert, 1)), false);
    for (int v = 0; v < g.nvert; ++v) g.root[static_cast<std::size_t>(v)] = find(v);
    for (int v = 0; v < g.nvert; ++v)
        if (touches[static_cast<std::size_t>(v)])
            g.touches_output[static_cast<std::size_t>(g.root[static_cast<std::size_t>(v)])] = true;
    return g;
}

}  // namespace

int Term::connected_components() const {
    TermGraph g = term_graph(*this);
    std::set<int> roots;
    for (int v = 0; v < g.nvert; ++v) roots.insert(g.root[static_cast<std::size_t>(v)]);
    return static_cast<int>(roots.size());
}

bool Term::has_closed_scalar_factor() const {
    TermGraph g = term_graph(*this);
    std::set<int> roots;
    for (int v = 0; v < g.nvert; ++v) roots.insert(g.root[static_cast<std::size_t>(v)]);
    for (int r : roots)
        if (!g.touches_output[static_cast<std::size_t>(r)]) return true;
    return false;
}

bool Term::has_closed_marginal_factor() const {
    auto blocks = monomial.all_blocks();
    if (monomial.marginal_blocks.empty()) return false;
    TermGraph g = term_graph(*this);
    // a root is disqualified if its component touches output or contains a
    // non-marginal vertex
    std::set<int> open;
    for (int v = 0; v < g.nvert; ++v) {
        int r = g.root[static_cast<std::size_t>(v)];
        bool marginal_vertex = v < static_cast<int>(blocks.size()) &&
                               blocks[static_cast<std::size_t>(v)].marginal;
        if (!marginal_vertex || g.touches_output[static_cast<std::size_t>(r)]) open.insert(r);
    }
    for (int v = 0; v < g.nvert; ++v)
        if (!open.count(g.root[static_cast<std::size_t>(v)])) return true;
    return false;
}

bool Term::module_reducible(int dim) const {
    if (monomial.marginal_blocks.empty()) return false;
    if (has_closed_marginal_factor()) return true;
    // chains of rank-2 marginal blocks: vertices of degree <= 2 in the
    // marginal-marginal contraction subgraph form paths (cycles are closed
    // factors, already handled); a path of >= dim blocks is reducible
    auto blocks = monomial.all_blocks();
    const int nb = static_cast<int>(blocks.size());
    std::vector<bool> chainable(static_cast<std::size_t>(nb), false);
    for (int v = 0; v < nb; ++v)
        chainable[static_cast<std::size_t>(v)] =
            blocks[static_cast<std::size_t>(v)].marginal && blocks[static_cast<std::size_t>(v)].rank == 2;

    std::vector<int> vert;
    for (int b = 0; b < nb; ++b)
        for (int s = 0; s < blocks[static_cast<std::size_t>(b)].rank; ++s) vert.push_back(b);
    while (static_cast<int>(vert.size()) < total_slots()) vert.push_back(-1);

    std::vector<int> parent(static_cast<std::size_t>(nb));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x)
            x = parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        return x;
    };
    for (auto [a, b] : pairs) {
        int va = vert[static_cast<std::size_t>(a)], vb = vert[static_cast<std::size_t>(b)];
        if (va >= 0 && vb >= 0 && va != vb && chainable[static_cast<std::size_t>(va)] &&
            chainable[static_cast<std::size_t>(vb)])
            parent[static_cast<std::size_t>(find(va))] = find(vb);
    }
    std::map<int, int> size;
    for (int v = 0; v < nb; ++v)
        if (chainable[static_cast<std::size_t>(v)]) size[find(v)]++;
    for (auto [root, count] : size)
        if (count >= dim) return true;
    return false;
}

std::vector<Term> enumerate_schemes(const Monomial& mono, const OutputSignature& out,
                                    bool oriented, int dim) {
    std::vector<Term> result;
    for (int eps = 0; eps <= (oriented ? 1 : 0); ++eps) {
        int nslots = 0;
        for (const auto& b : mono.all_blocks()) nslots += b.rank;
        nslots += (eps ? dim : 0) + out.rank;
        if (nslots % 2 != 0) continue;  // parity impossible

        PortTable pt = build_ports(mono, out, eps != 0, dim);
        Canonicalizer canon(pt);
        std::map<std::string, EdgeUnits> classes;
        enumerate_multigraphs(pt, [&](const EdgeUnits& edges) {
            if (vanishes(pt, edges)) return;
            std::string key = packed_key(canon.canonical(edges));
            classes.try_emplace(std::move(key), edges);
        });
        for (auto& [key, edges] : classes) {
            Term t;
            t.monomial = mono;
            t.out = out;
            t.epsilon = eps != 0;
            t.pairs = realize(pt, edges);
            t.scheme_key = (eps ? "e1#" : "e0#") + key;
            result.push_back(std::move(t));
        }
    }
    std::sort(result.begin(), result.end(),
              [](const Term& a, const Term& b) { return a.scheme_key < b.scheme_key; });
    return result;
}

Term make_term(const Monomial& mono, const OutputSignature& out,
               const std::vector<std::string>& letters, int dim, const std::string& eps_letters) {
    auto blocks = mono.all_blocks();
    if (letters.size() != blocks.size())
        throw std::invalid_argument("make_term: one letter string per block required");
    bool eps = !eps_letters.empty();

    // slot of each letter occurrence
    std::map<char, std::vector<int>> where;
    int slot = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (static_cast<int>(letters[b].size()) != blocks[b].rank)
            throw std::invalid_argument("make_term: letter count mismatch for block " +
                                        std::to_string(b));
        for (char c : letters[b]) where[c].push_back(slot++);
    }
    if (eps) {
        if (static_cast<int>(eps_letters.size()) != dim)
            throw std::invalid_argument("make_term: epsilon needs dim letters");
        for (char c : eps_letters) where[c].push_back(slot++);
    }
    int out_base = slot;

    Term t;
    t.monomial = mono;
    t.out = out;
    t.epsilon = eps;
    std::set<char> outs;
    for (auto& [c, slots] : where) {
        if (c >= 'a' && c < 'a' + out.rank && slots.size() == 1) {
            t.pairs.push_back({slots[0], out_base + (c - 'a')});
            outs.insert(c);
        } else if (slots.size() == 2) {
            t.pairs.push_back({slots[0], slots[1]});
        } else {
            throw std::invalid_argument(std::string("make_term: letter '") + c +
                                        "' must appear exactly twice or be an output letter");
        }
    }
    // bare metric factors for output letters never mentioned: pair leftover
    // output slots among themselves in order (g_{ab} insertions)
    std::vector<int> leftover;
    for (int r = 0; r < out.rank; ++r)
        if (!outs.count(static_cast<char>('a' + r))) leftover.push_back(out_base + r);
    if (leftover.size() % 2 != 0)
        throw std::invalid_argument("make_term: unmatched output slots");
    for (std::size_t i = 0; i + 1 < leftover.size(); i += 2)
        t.pairs.push_back({leftover[i], leftover[i + 1]});

    std::sort(t.pairs.begin(), t.pairs.end());
    const int total = out_base + out.rank;
    std::vector<int> partner(static_cast<std::size_t>(total), -1);
    for (auto [a, b] : t.pairs) {
        if (partner[static_cast<std::size_t>(a)] >= 0 || partner[static_cast<std::size_t>(b)] >= 0)
            throw std::invalid_argument("make_term: slot used twice");
        partner[static_cast<std::size_t>(a)] = b;
        partner[static_cast<std::size_t>(b)] = a;
    }
    for (int s = 0; s < total; ++s)
        if (partner[static_cast<std::size_t>(s)] < 0)
            throw std::invalid_argument("make_term: slot " + std::to_string(s) + " unmatched");

    // canonical key: express the matching as port-level unit edges
    PortTable pt = build_ports(mono, out, eps, dim);
    std::vector<int> port_of(static_cast<std::size_t>(total), -1);
    for (std::size_t p = 0; p < pt.ports.size(); ++p)
        for (int s : pt.ports[p].slots) port_of[static_cast<std::size_t>(s)] = static_cast<int>(p);
    EdgeUnits edges;
    for (auto [a, b] : t.pairs) {
        int pa = port_of[static_cast<std::size_t>(a)], pb = port_of[static_cast<std::size_t>(b)];
        if (pb < pa) std::swap(pa, pb);
        edges.push_back({pa, pb});
    }
    Canonicalizer canon(pt);
    t.scheme_key = (eps ? "e1#" : "e0#") + packed_key(canon.canonical(edges));
    return t;
}

}  // namespace wickgen
