#include "calculus/relations.hpp"

#include <algorithm>

#include "core/grid.hpp"

namespace fiberloc::calculus {

std::string LocalIndexSymbol::to_string() const {
    std::string name = kind == SymbolKind::RR0 ? "RR0" : "RR1";
    return name + "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

std::vector<RelationInstance> generate_system(int64_t bound, const SystemOptions& opts) {
    if (bound < 2) throw Error("generate_system: bound must be >= 2");
    std::vector<RelationInstance> out;
    auto sym = [](SymbolKind k, int64_t a, int64_t b) { return LocalIndexSymbol{k, a, b}; };
    auto in_box = [bound](int64_t v) { return v >= -bound && v <= bound; };

    // RR0(a,b) = RR0(b,a)
    for (int64_t a = -bound; a <= bound; ++a) {
        for (int64_t b = a + 1; b <= bound; ++b) {
            out.push_back({{{sym(SymbolKind::RR0, a, b), 1}, {sym(SymbolKind::RR0, b, a), -1}},
                           0,
                           "RR0 symmetry"});
        }
    }
    // RR1(a,b) = RR1(a+c,b+c)
    for (int64_t a = -bound; a <= bound; ++a) {
        for (int64_t b = -bound; b <= bound; ++b) {
            for (int64_t c = 1; in_box(a + c) && in_box(b + c); ++c) {
                out.push_back({{{sym(SymbolKind::RR1, a, b), 1},
                                {sym(SymbolKind::RR1, a + c, b + c), -1}},
                               0,
                               "RR1 shift"});
            }
        }
    }
    // RR0(a,b) = RR0(a',b) + RR1(a',a)
    for (int64_t a = -bound; a <= bound; ++a) {
        for (int64_t b = -bound; b <= bound; ++b) {
            for (int64_t ap = -bound; ap <= bound; ++ap) {
                if (ap == a) continue;
                out.push_back({{{sym(SymbolKind::RR0, a, b), 1},
                                {sym(SymbolKind::RR0, ap, b), -1},
                                {sym(SymbolKind::RR1, ap, a), -1}},
                               0,
                               "RR0/RR1 excision"});
            }
        }
    }
    // RR1(a,c) = RR1(a,b) + RR1(b,c)
    for (int64_t a = -bound; a <= bound; ++a) {
        for (int64_t b = -bound; b <= bound; ++b) {
            for (int64_t c = -bound; c <= bound; ++c) {
                out.push_back({{{sym(SymbolKind::RR1, a, c), 1},
                                {sym(SymbolKind::RR1, a, b), -1},
                                {sym(SymbolKind::RR1, b, c), -1}},
                               0,
                               "RR1 additivity"});
            }
        }
    }
    if (opts.include_cp2_fact) {
        out.push_back(
            {{{sym(SymbolKind::RR0, 0, 1), 3}}, 3, "projective plane: 3 vertices sum to 3"});
    }
    if (opts.include_p1p1_fact) {
        out.push_back(
            {{{sym(SymbolKind::RR0, 0, 0), 4}}, 4, "quadric: 4 vertices sum to 4"});
    }
    for (const auto& e : opts.extra_facts) out.push_back(e);
    return out;
}

namespace {

/// Sparse row over Q with provenance: sum(coeffs * symbol) = rhs.
struct Row {
    std::map<LocalIndexSymbol, Rational> coeffs;
    Rational rhs;
    std::set<size_t> provenance;

    void add_multiple(const Row& other, const Rational& factor) {
        for (const auto& [s, c] : other.coeffs) {
            auto it = coeffs.find(s);
            if (it == coeffs.end()) {
                Rational v = c * factor;
                if (!v.is_zero()) coeffs.emplace(s, v);
            } else {
                it->second += c * factor;
                if (it->second.is_zero()) coeffs.erase(it);
            }
        }
        rhs += other.rhs * factor;
        provenance.insert(other.provenance.begin(), other.provenance.end());
    }
};

struct Elimination {
    std::map<LocalIndexSymbol, Row> pivots;
    bool inconsistent = false;
    std::set<size_t> witness;

    void insert(Row row) {
        // reduce against existing pivots
        for (;;) {
            const LocalIndexSymbol* hit = nullptr;
            for (const auto& [s, c] : row.coeffs) {
                if (pivots.count(s)) {
                    hit = &s;
                    break;
                }
            }
            if (!hit) break;
            Rational factor = -row.coeffs.at(*hit);
            row.add_multiple(pivots.at(*hit), factor);
        }
        if (row.coeffs.empty()) {
            if (!row.rhs.is_zero() && !inconsistent) {
                inconsistent = true;
                witness = row.provenance;
            }
            return;
        }
        // pivot on the largest remaining symbol; normalize to coefficient 1
        auto pivot_it = std::prev(row.coeffs.end());
        LocalIndexSymbol pivot = pivot_it->first;
        Rational inv = Rational(1) / pivot_it->second;
        for (auto& [s, c] : row.coeffs) c *= inv;
        row.rhs *= inv;
        // eliminate the new pivot from existing rows
        for (auto& [s, existing] : pivots) {
            auto it = existing.coeffs.find(pivot);
            if (it == existing.coeffs.end()) continue;
            Rational factor = -it->second;
            existing.add_multiple(row, factor);
        }
        pivots.emplace(pivot, std::move(row));
    }
};

bool subset_feasible(const std::vector<RelationInstance>& system,
                     const std::vector<size_t>& subset) {
    Elimination elim;
    for (size_t id : subset) {
        Row row;
        for (const auto& [s, c] : system[id].terms) {
            if (c != 0) row.coeffs[s] += Rational(c);
        }
        for (auto it = row.coeffs.begin(); it != row.coeffs.end();) {
            it = it->second.is_zero() ? row.coeffs.erase(it) : std::next(it);
        }
        row.rhs = Rational(system[id].rhs);
        row.provenance = {id};
        elim.insert(std::move(row));
        if (elim.inconsistent) return false;
    }
    return true;
}

}  // namespace

LocalIndexTable solve(const std::vector<RelationInstance>& system, int64_t bound) {
    Elimination elim;
    for (size_t id = 0; id < system.size(); ++id) {
        Row row;
        for (const auto& [s, c] : system[id].terms) {
            if (c != 0) row.coeffs[s] += Rational(c);
        }
        for (auto it = row.coeffs.begin(); it != row.coeffs.end();) {
            it = it->second.is_zero() ? row.coeffs.erase(it) : std::next(it);
        }
        row.rhs = Rational(system[id].rhs);
        row.provenance = {id};
        elim.insert(std::move(row));
    }

    LocalIndexTable table;
    table.bound = bound;
    if (elim.inconsistent) {
        table.consistent = false;
        table.determined = false;
        // shrink the provenance set to an irreducible infeasible subset
        std::vector<size_t> witness(elim.witness.begin(), elim.witness.end());
        for (size_t i = 0; i < witness.size();) {
            std::vector<size_t> trial = witness;
            trial.erase(trial.begin() + static_cast<int64_t>(i));
            if (!subset_feasible(system, trial)) {
                witness = std::move(trial);
            } else {
                ++i;
            }
        }
        table.infeasible_witness = std::move(witness);
        return table;
    }

    // symbol universe of the box
    std::vector<LocalIndexSymbol> all;
    for (int kind = 0; kind < 2; ++kind) {
        for (int64_t a = -bound; a <= bound; ++a) {
            for (int64_t b = -bound; b <= bound; ++b)
                all.push_back({kind == 0 ? SymbolKind::RR0 : SymbolKind::RR1, a, b});
        }
    }
    std::set<LocalIndexSymbol> free;
    for (const auto& s : all) {
        if (!elim.pivots.count(s)) free.insert(s);
    }
    table.free_symbols.assign(free.begin(), free.end());
    table.determined = free.empty();

    for (const auto& s : all) {
        AffineValue v;
        auto it = elim.pivots.find(s);
        if (it == elim.pivots.end()) {
            // s is itself a free parameter
            v.constant = Rational(0);
            v.free_coeffs[s] = Rational(1);
        } else {
            v.constant = it->second.rhs;
            for (const auto& [other, c] : it->second.coeffs) {
                if (other == s) continue;
                // pivot row: s + sum(c * other) = rhs  =>  s = rhs - sum(...)
                v.free_coeffs[other] = -c;
            }
        }
        table.values.emplace(s, std::move(v));
    }
    return table;
}

int64_t LocalIndexTable::value(SymbolKind kind, int64_t a, int64_t b) const {
    auto it = values.find({kind, a, b});
    if (it == values.end()) throw Error("local index table: symbol outside the solved box");
    if (!consistent) throw Error("local index table: system was inconsistent");
    if (!it->second.determined()) throw Error("local index table: symbol undetermined");
    const Rational& v = it->second.constant;
    if (!v.is_integer()) throw Error("local index table: non-integer solved value");
    return v.num();
}

std::optional<size_t> check_all_relations(const std::vector<RelationInstance>& system,
                                          const LocalIndexTable& table) {
    for (size_t id = 0; id < system.size(); ++id) {
        // accumulate both the constant and every free coefficient
        Rational constant(-system[id].rhs);
        std::map<LocalIndexSymbol, Rational> free;
        for (const auto& [s, c] : system[id].terms) {
            auto it = table.values.find(s);
            if (it == table.values.end()) return id;
            constant += it->second.constant * Rational(c);
            for (const auto& [f, fc] : it->second.free_coeffs) free[f] += fc * Rational(c);
        }
        if (!constant.is_zero()) return id;
        for (const auto& [f, fc] : free) {
            if (!fc.is_zero()) return id;
        }
    }
    return std::nullopt;
}

}  // namespace fiberloc::calculus
