use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{Mat3, Ray, Vec3};

pub const MIN_RESOLUTION: u32 = 16;

/// Camera position and orientation. The orientation's columns are the
/// camera's right, up and backward axes (it looks down its local −Z).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CameraPose {
    pub position: Vec3,
    pub orientation: Mat3,
}

impl CameraPose {
    pub fn look_at(eye: Vec3, target: Vec3, world_up: Vec3) -> Result<CameraPose> {
        let back = (eye - target).normalized();
        let right = world_up.cross(back);
        if right.length() < 1e-12 || back.length() < 1e-12 {
            return Err(Error::param("look_at: view direction is degenerate or parallel to up"));
        }
        let right = right.normalized();
        let up = back.cross(right);
        Ok(CameraPose {
            position: eye,
            orientation: Mat3::from_cols(right, up, back),
        })
    }

    pub fn forward(&self) -> Vec3 {
        -self.orientation.col(2)
    }

    pub fn up(&self) -> Vec3 {
        self.orientation.col(1)
    }

    /// Reflects the pose through the plane `{p : (p − point)·normal = 0}`,
    /// keeping a right-handed frame.
    pub fn mirrored(&self, point: Vec3, normal: Vec3) -> CameraPose {
        let n = normal.normalized();
        let reflect_point = |p: Vec3| p - n * (2.0 * (p - point).dot(n));
        let forward = self.forward().reflect(n);
        let up = self.up().reflect(n);
        let back = -forward;
        let right = up.cross(back);
        CameraPose {
            position: reflect_point(self.position),
            orientation: Mat3::from_cols(right, up, back),
        }
    }
}

/// Pinhole camera described by its physical lens and sensor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalCamera {
    pub focal_length_mm: f64,
    pub sensor_width_mm: f64,
    pub sensor_height_mm: f64,
    pub width: u32,
    pub height: u32,
    pub pose: CameraPose,
}

impl PhysicalCamera {
    pub fn new(
        focal_length_mm: f64,
        sensor_width_mm: f64,
        sensor_height_mm: f64,
        width: u32,
        height: u32,
        pose: CameraPose,
    ) -> Result<PhysicalCamera> {
        let cam = PhysicalCamera {
            focal_length_mm,
            sensor_width_mm,
            sensor_height_mm,
            width,
            height,
            pose,
        };
        cam.validate()?;
        Ok(cam)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("focal_length_mm", self.focal_length_mm),
            ("sensor_width_mm", self.sensor_width_mm),
            ("sensor_height_mm", self.sensor_height_mm),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::param(format!("{name} must be positive, got {v}")));
            }
        }
        if self.width < MIN_RESOLUTION || self.height < MIN_RESOLUTION {
            return Err(Error::param(format!(
                "resolution {}x{} below {MIN_RESOLUTION}x{MIN_RESOLUTION}",
                self.width, self.height
            )));
        }
        if !self.pose.orientation.is_rotation(1e-9) {
            return Err(Error::param("camera orientation is not a rotation"));
        }
        Ok(())
    }

    /// `2·atan(sensor_width / (2·focal_length))`.
    pub fn horizontal_fov(&self) -> f64 {
        2.0 * (self.sensor_width_mm / (2.0 * self.focal_length_mm)).atan()
    }

    pub fn vertical_fov(&self) -> f64 {
        2.0 * (self.sensor_height_mm / (2.0 * self.focal_length_mm)).atan()
    }

    /// Ray through sub-pixel position `(px + dx, py + dy)`; `(0.5, 0.5)` is the
    /// pixel center. Row 0 is the top of the image.
    pub fn ray(&self, px: u32, py: u32, dx: f64, dy: f64) -> Ray {
        let sx = ((f64::from(px) + dx) / f64::from(self.width) - 0.5) * self.sensor_width_mm;
        let sy = (0.5 - (f64::from(py) + dy) / f64::from(self.height)) * self.sensor_height_mm;
        let local = Vec3::new(sx, sy, -self.focal_length_mm);
        Ray::new(self.pose.position, (self.pose.orientation * local).normalized())
    }

    pub fn center_ray(&self, px: u32, py: u32) -> Ray {
        self.ray(px, py, 0.5, 0.5)
    }
}
