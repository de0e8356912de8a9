#pragma once

#include "imkit/canonical.hpp"
#include "imkit/channels.hpp"
#include "imkit/config.hpp"
#include "imkit/conversion.hpp"
#include "imkit/discrimination.hpp"
#include "imkit/io.hpp"
#include "imkit/linalg.hpp"
#include "imkit/measures.hpp"
#include "imkit/optics.hpp"
