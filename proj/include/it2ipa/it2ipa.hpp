#pragma once

#include "defuzz.hpp"
#include "error.hpp"
#include "io.hpp"
#include "ipamap.hpp"
#include "it2num.hpp"
#include "lingscale.hpp"
#include "pipeline.hpp"
#include "scoring.hpp"
#include "survey.hpp"
