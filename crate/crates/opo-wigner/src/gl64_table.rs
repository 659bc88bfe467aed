// Positive abscissae and weights of the 64-point Gauss-Legendre rule on
// [-1, 1]; the rule is symmetric.
#[allow(clippy::excessive_precision)]
const GL64: [(f64, f64); 32] = [
    (0.024350292663424432509, 0.048690957009139720383),
    (0.07299312178779903945, 0.048575467441503426935),
    (0.12146281929612055447, 0.04834476223480295717),
    (0.16964442042399281804, 0.047999388596458307728),
    (0.21742364374000708415, 0.047540165714830308662),
    (0.26468716220876741637, 0.046968182816210017325),
    (0.31132287199021095616, 0.046284796581314417296),
    (0.35722015833766811595, 0.04549162792741814448),
    (0.4022701579639916037, 0.04459055816375656306),
    (0.44636601725346408798, 0.043583724529323453377),
    (0.48940314570705295748, 0.042473515123653589007),
    (0.53127946401989454566, 0.04126256324262352861),
    (0.57189564620263403428, 0.039953741132720341387),
    (0.61115535517239325025, 0.038550153178615629129),
    (0.64896547125465733986, 0.03705512854024004604),
    (0.68523631305423324256, 0.035472213256882383811),
    (0.71988185017161082685, 0.033805161837141609392),
    (0.75281990726053189661, 0.032057928354851553585),
    (0.78397235894334140761, 0.030234657072402478868),
    (0.81326531512279755974, 0.028339672614259483228),
    (0.84062929625258036275, 0.026377469715054658672),
    (0.86599939815409281976, 0.024352702568710873338),
    (0.88931544599511410585, 0.022270173808383254159),
    (0.91052213707850280576, 0.020134823153530209372),
    (0.92956917213193957582, 0.017951715775697343085),
    (0.94641137485840281606, 0.015726030476024719322),
    (0.96100879965205371892, 0.013463047896718642598),
    (0.97332682778991096374, 0.011168139460131128819),
    (0.98333625388462595693, 0.008846759826363947723),
    (0.99101337147674432074, 0.0065044579689783628561),
    (0.99634011677195527935, 0.0041470332605624676353),
    (0.99930504173577213946, 0.0017832807216964329473),
];
