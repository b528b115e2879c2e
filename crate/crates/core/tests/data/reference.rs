// Generated by gen_reference.py; do not edit by hand.
#![allow(dead_code)]
pub const LOG_GAMMA_1P1I_RE: f64 = -0.65092319930185633889;
pub const LOG_GAMMA_1P1I_IM: f64 = -0.30164032046753319789;
pub const LOG_GAMMA_M2P5_0P75I_RE: f64 = -1.6362270839097973452;
pub const LOG_GAMMA_M2P5_0P75I_IM: f64 = -8.5899332984050309441;
pub const LOG_GAMMA_3P25_M17P5I_RE: f64 = -18.688074940262375755;
pub const LOG_GAMMA_3P25_M17P5I_IM: f64 = -36.695338455466208571;
pub const LOG_GAMMA_0P5_700I_RE: f64 = -1098.6384902232229607;
pub const LOG_GAMMA_0P5_700I_IM: f64 = 3885.7562940541998812;
pub const E_HALF_AT_1: f64 = 5.0089800807622834663;
pub const E_HALF_AT_M1: f64 = 0.42758357615580700441;
pub const E_HALF_AT_MHALF: f64 = 0.61569034419292587487;
pub const M_WRIGHT_HALF_AT_1: f64 = 0.43939128946772239705;
pub const DONSKER_ML05_EXPECTATION: f64 = 0.57703373861646968862;
pub const INV_GAMMA_1P5: f64 = 1.1283791670955125739;
pub const ML_GRID_S: [f64; 41] = [0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0, 2.25, 2.5, 2.75, 3.0, 3.25, 3.5, 3.75, 4.0, 4.25, 4.5, 4.75, 5.0, 5.25, 5.5, 5.75, 6.0, 6.25, 6.5, 6.75, 7.0, 7.25, 7.5, 7.75, 8.0, 8.25, 8.5, 8.75, 9.0, 9.25, 9.5, 9.75, 10.0];
pub const ML05_NEG_GRID: [f64; 41] = [1.0, 0.77034654773099674392, 0.61569034419292587487, 0.50693765029314480579, 0.42758357615580700441, 0.36782291645236109293, 0.32158541645431750235, 0.28497223473743638921, 0.25539567631050574387, 0.23108725873039186996, 0.21080636406114358065, 0.1936620962790686786, 0.17900115118138995042, 0.16633534842682187676, 0.1552936556088942974, 0.14558972127503853905, 0.13699945762506138989, 0.1293452747859879108, 0.12248480427384141755, 0.11630270721024730767, 0.11070463773306862637, 0.1056127354688918024, 0.10096221839949908823, 0.096698778169713920817, 0.092776567800538354389, 0.089156631787274389873, 0.085805670104894601778, 0.082695056775053059527, 0.07980005432915293349, 0.077099180351259901664, 0.074573693062876683005, 0.072207170814669760508, 0.069985166200880927723, 0.067894919882720562683, 0.065925122499980351741, 0.06406571555128014472, 0.062307724037774684147, 0.060643115141143659079, 0.059064678352563890854, 0.05756592336481546652, 0.056140992743822585858];
pub const ML09_NEG_GRID: [f64; 41] = [1.0, 0.77386953164960228438, 0.60340549869586096762, 0.4743110809192213152, 0.37606602142464188118, 0.30090786979675040876, 0.24309267847921726014, 0.19835742364840139681, 0.16352830001693004885, 0.13623469501180699324, 0.11469986754557785185, 0.097587409204742477936, 0.08388835403377326904, 0.072837970422717430463, 0.063854273735752437051, 0.056492468970472739858, 0.050411103314434622752, 0.045346846854216997736, 0.04109564631269347649, 0.037498598041465993563, 0.034431324804098423905, 0.03179596098588145364, 0.029515085110855629491, 0.02752711032161047706, 0.025782769712366070335, 0.024242426379243607026, 0.022874006683302962208, 0.021651406003518967245, 0.020553253921495641962, 0.019561953784808196907, 0.018662932471857279635, 0.017844051783673518809, 0.017095144580796809367, 0.016407647570242933607, 0.015774309269586656194, 0.015188956680281101482, 0.014646307996637194437, 0.014141821562129616559, 0.013671573485561779501, 0.013232158013831770089, 0.012820606051102102705];
pub const DUALITY_Z: [f64; 5] = [0.5, 1.0, 2.0, 5.0, 10.0];
pub const DUALITY_GAUSSIAN: [f64; 5] = [0.6065306597126334236, 0.3678794411714423216, 0.13533528323661269189, 0.0067379469990854670966, 0.000045399929762484851536];
pub const DUALITY_ML05: [f64; 5] = [0.61569034419292587487, 0.42758357615580700441, 0.25539567631050574387, 0.11070463773306862637, 0.056140992743822585858];
pub const DUALITY_ML09: [f64; 5] = [0.60340549869586096762, 0.37606602142464188118, 0.16352830001693004885, 0.034431324804098423905, 0.012820606051102102705];
pub const M_WRIGHT_09_TAU: [f64; 6] = [0.05, 0.3, 0.8, 1.0, 1.1, 1.3];
pub const M_WRIGHT_09_VALUES: [f64; 6] = [0.11434837006750705485, 0.18194069450750169802, 0.59406388434599548986, 1.0081467456212710728, 1.2663766366251265965, 1.4556009341505082192];
pub const GWM_DENSITY_X: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 3.0];
pub const GWM_DENSITY_ML05: [f64; 5] = [0.52256277961693187317, 0.34246273553620509582, 0.19166522116514657027, 0.051902872351038204451, 0.011966657308574899486];
pub const GWM_DENSITY_ML09: [f64; 5] = [0.42529484175831863722, 0.34899406595153205212, 0.22769101402540005834, 0.055586361560753765559, 0.0068093558163105607058];
