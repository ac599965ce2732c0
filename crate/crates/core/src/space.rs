use crate::connection::{u_tensor_solve, Connection, UTensor};
use crate::hermitian::{
    complex_structure, metric, orthonormal_frame, MetricTensor, OrthonormalFrame, StructureParams,
};
use crate::lie_algebra::{build_frame, ReductiveFrame, StructureConstants};
use crate::Result;

use nalgebra::DMatrix;

/// Everything needed to evaluate geometry at the identity coset for one
/// `(n, p, a, c)`: frames, structure constants, metric and connection.
#[derive(Debug, Clone)]
pub struct HermitianSpace {
    params: StructureParams,
    frame: ReductiveFrame,
    structure: StructureConstants,
    complex_structure: DMatrix<f64>,
    metric: MetricTensor,
    orthonormal: OrthonormalFrame,
    u: UTensor,
    connection: Connection,
}

impl HermitianSpace {
    pub fn new(params: StructureParams) -> Result<Self> {
        let frame = build_frame(params.n(), params.p())?;
        let structure = frame.structure_constants()?;
        let metric = metric(&params)?;
        let u = u_tensor_solve(&metric, &structure)?;
        let connection = Connection::new(&structure, &u);
        Ok(Self {
            params,
            complex_structure: complex_structure(&params),
            orthonormal: orthonormal_frame(&params),
            frame,
            structure,
            metric,
            u,
            connection,
        })
    }

    pub fn params(&self) -> &StructureParams {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.params.dim()
    }

    pub fn frame(&self) -> &ReductiveFrame {
        &self.frame
    }

    pub fn structure(&self) -> &StructureConstants {
        &self.structure
    }

    pub fn complex_structure(&self) -> &DMatrix<f64> {
        &self.complex_structure
    }

    pub fn metric(&self) -> &MetricTensor {
        &self.metric
    }

    pub fn orthonormal(&self) -> &OrthonormalFrame {
        &self.orthonormal
    }

    /// The solved connection tensor.
    pub fn u(&self) -> &UTensor {
        &self.u
    }

    pub fn connection(&self) -> &Connection {
        &self.connection
    }
}
