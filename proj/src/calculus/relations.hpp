#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "core/rational.hpp"

namespace fiberloc::calculus {

enum class SymbolKind { RR0, RR1 };

/// RR0(a,b) or RR1(a,b) with parameters in a bounded box.
struct LocalIndexSymbol {
    SymbolKind kind = SymbolKind::RR0;
    int64_t a = 0;
    int64_t b = 0;

    friend bool operator<(const LocalIndexSymbol& x, const LocalIndexSymbol& y) {
        return std::tie(x.kind, x.a, x.b) < std::tie(y.kind, y.a, y.b);
    }
    friend bool operator==(const LocalIndexSymbol& x, const LocalIndexSymbol& y) {
        return x.kind == y.kind && x.a == y.a && x.b == y.b;
    }
    std::string to_string() const;
};

/// Integer-linear equation sum(coeff * symbol) = rhs.
struct RelationInstance {
    std::vector<std::pair<LocalIndexSymbol, int64_t>> terms;
    int64_t rhs = 0;
    std::string description;
};

/// All instances of the four relation families on the parameter box
/// |a|,|b| <= bound, plus the two base facts 3 RR0(0,1) = 3 (projective
/// plane, three fixed points) and 4 RR0(0,0) = 4 (product of two lines,
/// four vertices). Flags allow dropping either base fact or none.
struct SystemOptions {
    bool include_cp2_fact = true;
    bool include_p1p1_fact = true;
    std::vector<RelationInstance> extra_facts;
};

std::vector<RelationInstance> generate_system(int64_t bound, const SystemOptions& opts = {});

/// Value of one symbol as an affine expression in the free parameters of an
/// underdetermined solve: constant + sum(coeff_i * free_i).
struct AffineValue {
    Rational constant;
    std::map<LocalIndexSymbol, Rational> free_coeffs;

    bool determined() const { return free_coeffs.empty(); }
};

struct LocalIndexTable {
    int64_t bound = 0;
    bool consistent = true;
    bool determined = true;  // unique solution on the box
    std::map<LocalIndexSymbol, AffineValue> values;
    std::vector<LocalIndexSymbol> free_symbols;
    /// Irreducible infeasible subset (indices into the input system) when
    /// inconsistent.
    std::vector<size_t> infeasible_witness;

    /// Determined integer value; throws if unsolved or non-integral.
    int64_t value(SymbolKind kind, int64_t a, int64_t b) const;
};

/// Exact rational Gaussian elimination (incremental reduced row echelon with
/// provenance tracking for infeasibility witnesses).
LocalIndexTable solve(const std::vector<RelationInstance>& system, int64_t bound);

/// Substitutes the solved table into every relation; returns the first
/// violated instance, or nullopt if all hold.
std::optional<size_t> check_all_relations(const std::vector<RelationInstance>& system,
                                          const LocalIndexTable& table);

}  // namespace fiberloc::calculus
