#pragma once

#include <map>

#include "ellgen/fgl.hpp"

namespace ellgen {

enum class BaseKind { ordinary, laurent };

// unit * prod_I F_I^eps[I], where F_I is the F-sum of the slots in the bitmask I
// (bit j is slot x{j+1}). The unit lives over the base variables followed by
// the slots x1..xp.
struct ThetaSection {
    int p = 0;
    FormalGroupLaw fgl;
    MultiSeries unit;
    std::map<unsigned, int> eps;
    BaseKind base_kind = BaseKind::ordinary;

    // eps_I = (-1)^{|I|+1} for every nonempty I
    bool has_structure_pattern() const;
    std::vector<VarSpec> base_vars() const;
};

std::string slot_name(int i);

ThetaSection theta_p_from_trivialization(const Coordinate& f, const FormalGroupLaw& F, int p);
ThetaSection trivial_section(const ThetaSection& like, int p);

ThetaSection operator*(const ThetaSection& a, const ThetaSection& b);
ThetaSection inverse(const ThetaSection& s);
ThetaSection quotient(const ThetaSection& a, const ThetaSection& b);

// pull back along slot_i -> F-sum of the new slots in images[i] (0 means slot_i -> 0)
ThetaSection pullback(const ThetaSection& s, int new_p, const std::vector<unsigned>& images);
// slot i goes to slot perm[i] (0-based)
ThetaSection permute_slots(const ThetaSection& s, const std::vector<int>& perm);

// eps identically zero and unit = 1 on a window containing the origin
bool is_trivial(const ThetaSection& s);
bool equal_sections(const ThetaSection& a, const ThetaSection& b);

ThetaSection delta(const ThetaSection& s);

struct AxiomReport {
    bool rigidity = false;
    bool symmetry = false;
    bool cocycle = false;
    bool cocycle_checked = false;
    bool ok() const { return rigidity && symmetry && (cocycle || !cocycle_checked); }
};
AxiomReport check_axioms(const ThetaSection& s, bool cocycle_for_p4 = false);

// last slot -> y, folding every F(F_I, y) into the unit over base((y))
ThetaSection sharp(const ThetaSection& s, const std::string& y = "y");

struct Residual {
    ThetaSection value;
    bool trivial = false;
};
Residual verify_delta_sharp_commute(const ThetaSection& s);
// Theta^k applied to the Theta^l section of f, against the Theta^{k+l-1} section
Residual verify_theta_of_theta(const Coordinate& f, const FormalGroupLaw& F, int k, int l);

nlohmann::json section_to_json(const ThetaSection& s);
ThetaSection section_from_json(const nlohmann::json& j);

}  // namespace ellgen
