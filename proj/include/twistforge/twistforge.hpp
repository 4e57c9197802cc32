#pragma once

#include "curve_spec.hpp"
#include "embedding.hpp"
#include "fixtures.hpp"
#include "groups.hpp"
#include "pipeline.hpp"
#include "report.hpp"
#include "selftest.hpp"
#include "text.hpp"
#include "twist.hpp"
