#pragma once

#include "bidisk/rng.hpp"
#include "bidisk/parallel.hpp"
#include "bidisk/mobius.hpp"
#include "bidisk/funcspace.hpp"
#include "bidisk/grammar.hpp"
#include "bidisk/psd.hpp"
#include "bidisk/kernel.hpp"
#include "bidisk/classes.hpp"
#include "bidisk/geometry.hpp"
#include "bidisk/hardy.hpp"
