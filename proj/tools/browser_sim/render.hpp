#pragma once

#include <string>

#include "page_model.hpp"

namespace browser_sim {

/// Paints the page state into a binary PPM. Solid panels are uniform fill;
/// 'points' panels get a deterministic scatter seeded by panel id and
/// interaction generation, so brushing visibly changes the pixels.
std::string render_ppm(const PageModel& model);

}  // namespace browser_sim
