#include "sbd/assembly.hpp"

#include "assembler.hpp"

namespace sbd {

LinearSystem assemble_full(const StaggeredGrid& grid, const PhysicalParams& params, const SourceFieldsFull& sources,
                           const BoundarySpec& bcs) {
    if (grid.layout() == Layout::Reduced) throw ValidationError("assemble_full: grid was built for the reduced model");
    detail::Assembler a(grid, params, bcs, sources.f_ff, sources.f_tr, sources.q, std::nullopt);
    return a.run();
}

}  // namespace sbd
