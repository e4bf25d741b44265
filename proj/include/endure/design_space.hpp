#ifndef ENDURE_DESIGN_SPACE_HPP
#define ENDURE_DESIGN_SPACE_HPP

#include <vector>

#include "endure/cost_model.hpp"
#include "endure/solver.hpp"
#include "endure/types.hpp"

namespace endure {

// Box bounds on the tunable quantities. A negative m_filt_max means
// "everything but one buffered entry", i.e. m - E.
struct DesignBounds {
    double T_min = 2.0;
    double T_max = 100.0;
    double m_filt_min = 0.0;
    double m_filt_max = -1.0;

    double filter_cap(const SystemParams& sys) const {
        return m_filt_max < 0.0 ? sys.m - sys.E : m_filt_max;
    }
};

void require_valid_bounds(const DesignBounds& b, const SystemParams& sys);

// Maps normalized solver variables in [0,1]^d onto designs of one family.
// Layout: x[0] is T, x[1] is m_filt (omitted when pinned), then capacity
// variables k in [0,1] with K_i = 1 + k*(T-2), which keeps K feasible for
// whatever T the solver is currently visiting.
class DesignSpace {
  public:
    static DesignSpace for_family(Policy family, const SystemParams& sys,
                                  const DesignBounds& bounds);
    static DesignSpace memory_pinned(const SystemParams& sys, const DesignBounds& bounds,
                                     double m_filt_fixed);

    std::size_t dims() const;
    BoxBounds box() const;
    LsmDesign design_at(const std::vector<double>& x) const;
    // Surrogate evaluation point. Families that anchor a special capacity to
    // the deepest level reassign that role when the level count ticks over,
    // which puts a step into the relaxed cost; `lo` carries the shallower
    // pattern's roles so the two costs can be blended by `ease`. ease is 1 at
    // integer depths (and always, for families without the anchor), where the
    // blend reduces to the plain pattern.
    struct SmoothPoint {
        LsmDesign hi;
        LsmDesign lo;
        double ease = 1.0;
    };
    SmoothPoint smooth_point_at(const std::vector<double>& x) const;
    std::vector<double> encode(const LsmDesign& d) const;

    Policy family() const { return family_; }
    const SystemParams& sys() const { return sys_; }
    const DesignBounds& bounds() const { return bounds_; }
    bool memory_pinned() const { return pin_memory_; }

  private:
    Policy family_ = Policy::klsm;
    SystemParams sys_;
    DesignBounds bounds_;
    int k_dims_ = 0;
    bool pin_memory_ = false;
    double pinned_m_filt_ = 0.0;
};

}  // namespace endure

#endif
