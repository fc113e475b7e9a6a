#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace bmtk {

namespace {

// Plans are cached per (dim,size,direction) and executed through the
// new-array interface.  All complex buffers come from the 64-byte aligned
// allocator, so the alignment seen at planning time holds for every execute.
class PlanCache {
  public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(const Grid& g, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        Key key{g.dim, g.size, sign};
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;

        ComplexVec scratch_in(g.point_count());
        ComplexVec scratch_out(g.point_count());
        fftw_complex* in = reinterpret_cast<fftw_complex*>(scratch_in.data());
        fftw_complex* out = reinterpret_cast<fftw_complex*>(scratch_out.data());
        fftw_plan plan = nullptr;
        if (g.dim == 2)
            plan = fftw_plan_dft_2d(g.size, g.size, in, out, sign, FFTW_ESTIMATE);
        else
            plan = fftw_plan_dft_3d(g.size, g.size, g.size, in, out, sign, FFTW_ESTIMATE);
        if (!plan) fail_invalid("fftw planning failed");
        plans_.emplace(key, plan);
        return plan;
    }

  private:
    struct Key {
        int dim, size, sign;
        bool operator<(const Key& o) const {
            if (dim != o.dim) return dim < o.dim;
            if (size != o.size) return size < o.size;
            return sign < o.sign;
        }
    };
    std::mutex mutex_;
    std::map<Key, fftw_plan> plans_;
};

void execute(const Grid& g, int sign, ComplexVec& inout) {
    fftw_plan plan = PlanCache::instance().get(g, sign);
    ComplexVec out(inout.size());
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(inout.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    inout.swap(out);
}

}  // namespace

void fft_forward(const Grid& g, ComplexVec& inout) { execute(g, FFTW_FORWARD, inout); }
void fft_backward(const Grid& g, ComplexVec& inout) { execute(g, FFTW_BACKWARD, inout); }

SpectralField to_spectral(const RealField& f) {
    f.require_finite("to_spectral");
    SpectralField F(f.grid());
    for (std::size_t i = 0; i < f.size(); ++i) F[i] = f[i];
    fft_forward(f.grid(), F.coeff());
    const double scale = 1.0 / static_cast<double>(f.grid().point_count());
    for (auto& c : F.coeff()) c *= scale;
    return F;
}

RealField to_physical(const SpectralField& F) {
    ComplexVec work = F.coeff();
    fft_backward(F.grid(), work);
    RealField f(F.grid());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = work[i].real();
    return f;
}

}  // namespace bmtk
