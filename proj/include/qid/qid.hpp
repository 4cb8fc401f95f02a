#pragma once

#include "qid/brst.hpp"
#include "qid/heatkernel.hpp"
#include "qid/innerspace.hpp"
#include "qid/looptab.hpp"
#include "qid/powercount.hpp"
#include "qid/renorm.hpp"
#include "qid/rules.hpp"
#include "qid/symcore/graded_serialize.hpp"
#include "qid/symcore/integrated_normal_form.hpp"
#include "qid/symcore/serialize.hpp"
