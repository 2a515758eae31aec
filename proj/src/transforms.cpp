#include "couette/transforms.hpp"

#include <fftw3.h>

#include <mutex>

namespace couette {

namespace {
// FFTW planner state is global; serialize plan creation/destruction.
std::mutex planner_mutex;
}  // namespace

struct SpectralTransform::Plans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
  fftw_complex* buf = nullptr;
  int n = 0;
};

SpectralTransform::SpectralTransform(const FrequencyGrid& grid)
    : grid_(grid), plans_(std::make_unique<Plans>()) {
  grid_.validate();
  std::lock_guard lock(planner_mutex);
  plans_->n = grid.modes_x * grid.modes_y;
  plans_->buf = fftw_alloc_complex(plans_->n);
  // In-place c2c plans; FFTW_ESTIMATE keeps planning deterministic.
  plans_->forward =
      fftw_plan_dft_2d(grid.modes_x, grid.modes_y, plans_->buf, plans_->buf,
                       FFTW_FORWARD, FFTW_ESTIMATE);
  plans_->inverse =
      fftw_plan_dft_2d(grid.modes_x, grid.modes_y, plans_->buf, plans_->buf,
                       FFTW_BACKWARD, FFTW_ESTIMATE);
}

SpectralTransform::~SpectralTransform() {
  std::lock_guard lock(planner_mutex);
  fftw_destroy_plan(plans_->forward);
  fftw_destroy_plan(plans_->inverse);
  fftw_free(plans_->buf);
}

RealGrid SpectralTransform::to_physical(const SpectralField& field) const {
  if (!(field.grid == grid_))
    throw std::invalid_argument("to_physical: grid mismatch");
  auto* buf = reinterpret_cast<Complex*>(plans_->buf);
  std::copy_n(field.coeffs.data(), plans_->n, buf);
  fftw_execute(plans_->inverse);
  RealGrid out(grid_.modes_x, grid_.modes_y);
  for (int idx = 0; idx < plans_->n; ++idx) out.data()[idx] = buf[idx].real();
  return out;
}

SpectralField SpectralTransform::to_spectral(const RealGrid& samples) const {
  if (samples.rows() != grid_.modes_x || samples.cols() != grid_.modes_y)
    throw std::invalid_argument("to_spectral: dimension mismatch");
  auto* buf = reinterpret_cast<Complex*>(plans_->buf);
  for (int idx = 0; idx < plans_->n; ++idx) buf[idx] = samples.data()[idx];
  fftw_execute(plans_->forward);
  SpectralField out(grid_);
  const double scale = 1.0 / plans_->n;
  for (int idx = 0; idx < plans_->n; ++idx)
    out.coeffs.data()[idx] = buf[idx] * scale;
  out.symmetrize_hermitian();
  return out;
}

double physical_l2_norm(const RealGrid& samples, const FrequencyGrid& grid) {
  const double cell = grid.box_length_x * grid.box_length_y /
                      (grid.modes_x * grid.modes_y);
  return std::sqrt(cell * samples.square().sum());
}

}  // namespace couette
